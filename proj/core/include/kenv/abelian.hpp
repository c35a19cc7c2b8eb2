#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kenv/rational.hpp"

namespace kenv {

using IVec = std::vector<Int>;
using IMat = std::vector<IVec>;  // row-major

struct SmithResult {
  IMat u;            // unimodular left transform, u * m * v = d
  IVec diag;         // d_1 | d_2 | ... (nonnegative, divisibility chain)
  int rank = 0;      // number of nonzero diagonal entries
};

// Smith normal form of an integer matrix; only the left transform is
// tracked (enough to present the cokernel).
SmithResult smith_normal_form(IMat m);

// Row-style Hermite normal form under left GL(ZZ) action: pivots positive,
// entries above each pivot reduced into [0, pivot). Canonical form of the
// row space; used to make quotient coordinates deterministic.
IMat hermite_normal_form(IMat m);

class AbelianGroup;
using GroupPtr = std::shared_ptr<const AbelianGroup>;

// Element of a finitely generated abelian group in normal form: free
// coordinates in ZZ^r, torsion coordinates reduced mod d_i.
class Degree {
 public:
  Degree() = default;
  Degree(GroupPtr g, IVec free_part, IVec torsion_part);

  const GroupPtr& group() const { return group_; }
  const IVec& free_part() const { return free_; }
  const IVec& torsion_part() const { return torsion_; }
  bool is_zero() const;

  Degree operator+(const Degree& o) const;
  Degree operator-(const Degree& o) const;
  Degree operator-() const;
  Degree operator*(long k) const;
  bool operator==(const Degree& o) const;
  bool operator<(const Degree& o) const;  // lexicographic; for ordered containers

  std::string str() const;  // "[a1,...,ar | t1,...,tk]"

 private:
  GroupPtr group_;
  IVec free_;
  IVec torsion_;
};

// Finitely generated abelian group presented as ZZ^k modulo the column
// span of a relation matrix, realized through Smith normal form.
class AbelianGroup : public std::enable_shared_from_this<AbelianGroup> {
 public:
  // relations: list of vectors in ZZ^k (the columns of the presentation).
  static GroupPtr cokernel(int ambient_rank, const IMat& relations);

  // Free group ZZ^r.
  static GroupPtr free_group(int r);

  int free_rank() const { return free_rank_; }
  const IVec& torsion() const { return torsion_; }  // moduli d_1 | d_2 | ..., each > 1
  int ambient_rank() const { return ambient_rank_; }
  bool is_trivial() const { return free_rank_ == 0 && torsion_.empty(); }

  // Class of an ambient integer vector.
  Degree project(const IVec& x) const;
  Degree zero() const;
  // Degree from already-reduced coordinates.
  Degree degree(IVec free_part, IVec torsion_part = {}) const;

  // Structurally equal groups (same invariants); projections may differ.
  bool same_invariants(const AbelianGroup& o) const;

  std::string str() const;  // "Z", "Z^2", "Z x Z/2", "0"

  IVec normalize_torsion(IVec t) const;

 private:
  friend class Degree;
  int ambient_rank_ = 0;
  int free_rank_ = 0;
  IVec torsion_;
  IMat free_rows_;     // canonical projection rows for the free part
  IMat torsion_rows_;  // projection rows for each torsion coordinate
};

struct Bidegree {
  Degree a;
  int h = 0;

  bool operator==(const Bidegree& o) const { return h == o.h && a == o.a; }
  bool operator<(const Bidegree& o) const { return h != o.h ? h < o.h : a < o.a; }
  std::string str() const { return "(" + a.str() + ", " + std::to_string(h) + ")"; }
};

}  // namespace kenv
