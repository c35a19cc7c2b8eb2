#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "kenv/abelian.hpp"
#include "kenv/linalg.hpp"
#include "kenv/polynomial.hpp"
#include "kenv/semigroup.hpp"

namespace kenv {

// A-grading data: deg x_i = alpha_i, deg e_i = -alpha_i, deg z_j = -beta_j,
// deg w_j = beta_j.
struct GradingScheme {
  GroupPtr group;
  std::vector<Degree> alpha;
  std::vector<Degree> beta;
};

// The defining equations W_1..W_m in Sym(V*) together with the grading,
// packaged with the total potential W = sum W_j z_j.
class Potential {
 public:
  // Without an explicit grading, A = ZZ with every deg x_i = 1 and the
  // beta_j read off from (necessarily homogeneous) equations.
  Potential(int n, int m, std::vector<Polynomial> equations,
            std::optional<GradingScheme> grading = std::nullopt);

  int n() const { return lay_.n; }
  int m() const { return lay_.m; }
  VarLayout layout() const { return lay_; }

  const Polynomial& equation(int j) const { return equations_[j]; }
  const std::vector<Polynomial>& equations() const { return equations_; }
  const Polynomial& total() const { return total_; }           // in Sym(V*) (x) U
  const Polynomial& quadratic_part() const { return quad_; }   // W^(2)
  const Polynomial& higher_part() const { return higher_; }    // W - W^(2)

  const GradingScheme& grading() const { return grading_; }
  const GroupPtr& group() const { return grading_.group; }

  // True if every equation lies in Sym^{>=2}(V*). The A-infinity pipeline
  // requires this; the Koszul regularity checker does not.
  bool no_linear_terms() const { return no_linear_; }
  void require_no_linear_terms(const char* who) const;

  Degree a_degree(const Monomial& mono) const;
  // Common A-degree of all terms; throws if inhomogeneous, nullopt if zero.
  std::optional<Degree> a_degree(const Polynomial& p) const;

  // l_k(e_{vs[0]}, ..., e_{vs[k-1]}) as a U-coefficient vector of length m.
  QVec l_k(const std::vector<int>& vs) const;
  // l_2 matrix entry as U-coefficients.
  const QVec& l2(int i, int j) const { return l2_[i][j]; }

  const QVec& positivity_functional() const { return phi_; }
  Scalar phi_of(const Degree& d) const;

  // All monomials in x_1..x_n of the given A-degree (complete enumeration;
  // finiteness is guaranteed by the pointedness of the grading cone).
  const std::vector<Monomial>& x_monomials_of_degree(const Degree& d) const;
  // Same in e_1..e_n; these have A-degree -sum a_i alpha_i.
  std::vector<Monomial> e_monomials_of_degree(const Degree& d) const;

 private:
  VarLayout lay_;
  std::vector<Polynomial> equations_;
  Polynomial total_, quad_, higher_;
  GradingScheme grading_;
  bool no_linear_ = true;
  QVec phi_;
  std::vector<std::vector<QVec>> l2_;

  mutable std::mutex cache_mutex_;
  mutable std::map<Degree, std::vector<Monomial>> x_mono_cache_;
};

}  // namespace kenv
