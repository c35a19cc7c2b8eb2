#include "kenv/abelian.hpp"

#include <algorithm>
#include <stdexcept>

namespace kenv {

namespace {

void row_axpy(IMat& m, size_t dst, size_t src, const Int& q) {
  // row dst -= q * row src
  for (size_t j = 0; j < m[dst].size(); ++j) m[dst][j] -= q * m[src][j];
}

void col_axpy(IMat& m, size_t dst, size_t src, const Int& q) {
  for (size_t i = 0; i < m.size(); ++i) m[i][dst] -= q * m[i][src];
}

void negate_row(IMat& m, size_t i) {
  for (auto& v : m[i]) v = -v;
}

}  // namespace

SmithResult smith_normal_form(IMat m) {
  size_t rows = m.size();
  size_t cols = rows ? m[0].size() : 0;
  SmithResult res;
  res.u.assign(rows, IVec(rows, 0));
  for (size_t i = 0; i < rows; ++i) res.u[i][i] = 1;

  size_t t = 0;
  size_t bound = std::min(rows, cols);
  while (t < bound) {
    // Locate a nonzero entry of minimal absolute value in the working block.
    size_t pi = t, pj = t;
    bool found = false;
    Int best;
    for (size_t i = t; i < rows; ++i)
      for (size_t j = t; j < cols; ++j) {
        if (m[i][j] == 0) continue;
        Int a = abs(m[i][j]);
        if (!found || a < best) {
          best = a;
          pi = i;
          pj = j;
          found = true;
        }
      }
    if (!found) break;
    std::swap(m[pi], m[t]);
    std::swap(res.u[pi], res.u[t]);
    for (size_t i = 0; i < rows; ++i) std::swap(m[i][pj], m[i][t]);

    bool clean = true;
    for (size_t i = t + 1; i < rows; ++i) {
      if (m[i][t] == 0) continue;
      Int q;
      mpz_tdiv_q(q.get_mpz_t(), m[i][t].get_mpz_t(), m[t][t].get_mpz_t());
      row_axpy(m, i, t, q);
      row_axpy(res.u, i, t, q);
      if (m[i][t] != 0) clean = false;
    }
    for (size_t j = t + 1; j < cols; ++j) {
      if (m[t][j] == 0) continue;
      Int q;
      mpz_tdiv_q(q.get_mpz_t(), m[t][j].get_mpz_t(), m[t][t].get_mpz_t());
      col_axpy(m, j, t, q);
      if (m[t][j] != 0) clean = false;
    }
    if (!clean) continue;  // smaller remainders appeared, pick a new pivot

    // Enforce the divisibility chain: fold in any non-divisible entry.
    bool divides_all = true;
    for (size_t i = t + 1; i < rows && divides_all; ++i)
      for (size_t j = t + 1; j < cols && divides_all; ++j)
        if (m[i][j] % m[t][t] != 0) {
          row_axpy(m, t, i, Int(-1));  // row t += row i
          row_axpy(res.u, t, i, Int(-1));
          divides_all = false;
        }
    if (!divides_all) continue;

    if (m[t][t] < 0) {
      negate_row(m, t);
      negate_row(res.u, t);
    }
    ++t;
  }
  res.rank = static_cast<int>(t);
  res.diag.assign(bound, Int(0));
  for (size_t i = 0; i < t; ++i) res.diag[i] = m[i][i];
  return res;
}

IMat hermite_normal_form(IMat m) {
  if (m.empty()) return m;
  size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    // gcd the column below r into one row
    for (;;) {
      size_t best = rows;
      for (size_t i = r; i < rows; ++i) {
        if (m[i][c] == 0) continue;
        if (best == rows || abs(m[i][c]) < abs(m[best][c])) best = i;
      }
      if (best == rows) break;
      std::swap(m[best], m[r]);
      bool done = true;
      for (size_t i = r + 1; i < rows; ++i) {
        if (m[i][c] == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), m[i][c].get_mpz_t(), m[r][c].get_mpz_t());
        row_axpy(m, i, r, q);
        if (m[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (m[r][c] == 0) continue;
    if (m[r][c] < 0) negate_row(m, r);
    // reduce entries above the pivot into [0, pivot)
    for (size_t i = 0; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), m[i][c].get_mpz_t(), m[r][c].get_mpz_t());
      row_axpy(m, i, r, q);
    }
    ++r;
  }
  m.resize(r);  // drop zero rows
  return m;
}

Degree::Degree(GroupPtr g, IVec free_part, IVec torsion_part)
    : group_(std::move(g)), free_(std::move(free_part)), torsion_(std::move(torsion_part)) {
  if (!group_) throw std::invalid_argument("Degree needs a group");
  if (static_cast<int>(free_.size()) != group_->free_rank() ||
      torsion_.size() != group_->torsion().size()) {
    throw std::invalid_argument("Degree coordinate size mismatch");
  }
  torsion_ = group_->normalize_torsion(std::move(torsion_));
}

bool Degree::is_zero() const {
  for (const auto& v : free_)
    if (v != 0) return false;
  for (const auto& v : torsion_)
    if (v != 0) return false;
  return true;
}

namespace {
void check_same_group(const Degree& a, const Degree& b) {
  if (a.group() == b.group()) return;
  if (a.group() && b.group() && a.group()->same_invariants(*b.group())) return;
  throw std::invalid_argument("degree arithmetic across different groups");
}
}  // namespace

Degree Degree::operator+(const Degree& o) const {
  check_same_group(*this, o);
  IVec f(free_), t(torsion_);
  for (size_t i = 0; i < f.size(); ++i) f[i] += o.free_[i];
  for (size_t i = 0; i < t.size(); ++i) t[i] += o.torsion_[i];
  return Degree(group_, std::move(f), std::move(t));
}

Degree Degree::operator-(const Degree& o) const { return *this + (-o); }

Degree Degree::operator-() const {
  IVec f(free_), t(torsion_);
  for (auto& v : f) v = -v;
  for (auto& v : t) v = -v;
  return Degree(group_, std::move(f), std::move(t));
}

Degree Degree::operator*(long k) const {
  IVec f(free_), t(torsion_);
  for (auto& v : f) v *= k;
  for (auto& v : t) v *= k;
  return Degree(group_, std::move(f), std::move(t));
}

bool Degree::operator==(const Degree& o) const {
  check_same_group(*this, o);
  return free_ == o.free_ && torsion_ == o.torsion_;
}

bool Degree::operator<(const Degree& o) const {
  check_same_group(*this, o);
  if (free_ != o.free_) return free_ < o.free_;
  return torsion_ < o.torsion_;
}

std::string Degree::str() const {
  std::string out = "[";
  for (size_t i = 0; i < free_.size(); ++i) {
    if (i) out += ",";
    out += to_string(free_[i]);
  }
  if (!torsion_.empty()) {
    out += "|";
    for (size_t i = 0; i < torsion_.size(); ++i) {
      if (i) out += ",";
      out += to_string(torsion_[i]);
    }
  }
  return out + "]";
}

GroupPtr AbelianGroup::cokernel(int ambient_rank, const IMat& relations) {
  for (const auto& rel : relations) {
    if (static_cast<int>(rel.size()) != ambient_rank)
      throw std::invalid_argument("relation vector has wrong length");
  }
  // Columns of the presentation matrix are the relations.
  IMat m(ambient_rank, IVec(relations.size(), 0));
  for (size_t c = 0; c < relations.size(); ++c)
    for (int r = 0; r < ambient_rank; ++r) m[r][c] = relations[c][r];
  SmithResult snf = smith_normal_form(std::move(m));

  auto g = std::make_shared<AbelianGroup>();
  g->ambient_rank_ = ambient_rank;
  IMat free_rows;
  for (int i = 0; i < ambient_rank; ++i) {
    Int d = (i < static_cast<int>(snf.diag.size())) ? snf.diag[i] : Int(0);
    if (d == 0) {
      free_rows.push_back(snf.u[i]);
    } else if (d > 1) {
      g->torsion_.push_back(d);
      g->torsion_rows_.push_back(snf.u[i]);
    }  // d == 1: trivial coordinate
  }
  g->free_rows_ = hermite_normal_form(std::move(free_rows));
  g->free_rank_ = static_cast<int>(g->free_rows_.size());
  return g;
}

GroupPtr AbelianGroup::free_group(int r) { return cokernel(r, {}); }

IVec AbelianGroup::normalize_torsion(IVec t) const {
  for (size_t i = 0; i < t.size(); ++i) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), t[i].get_mpz_t(), torsion_[i].get_mpz_t());
    t[i] = r;
  }
  return t;
}

Degree AbelianGroup::project(const IVec& x) const {
  if (static_cast<int>(x.size()) != ambient_rank_)
    throw std::invalid_argument("projection input has wrong length");
  IVec f(free_rank_, 0), t(torsion_.size(), 0);
  for (int i = 0; i < free_rank_; ++i)
    for (int j = 0; j < ambient_rank_; ++j) f[i] += free_rows_[i][j] * x[j];
  for (size_t i = 0; i < torsion_.size(); ++i)
    for (int j = 0; j < ambient_rank_; ++j) t[i] += torsion_rows_[i][j] * x[j];
  return Degree(shared_from_this(), std::move(f), std::move(t));
}

Degree AbelianGroup::zero() const {
  return Degree(shared_from_this(), IVec(free_rank_, 0), IVec(torsion_.size(), 0));
}

Degree AbelianGroup::degree(IVec free_part, IVec torsion_part) const {
  if (torsion_part.empty()) torsion_part.assign(torsion_.size(), 0);
  return Degree(shared_from_this(), std::move(free_part), std::move(torsion_part));
}

bool AbelianGroup::same_invariants(const AbelianGroup& o) const {
  return free_rank_ == o.free_rank_ && torsion_ == o.torsion_;
}

std::string AbelianGroup::str() const {
  std::string out;
  if (free_rank_ == 1) out = "Z";
  else if (free_rank_ > 1) out = "Z^" + std::to_string(free_rank_);
  for (const auto& d : torsion_) {
    if (!out.empty()) out += " x ";
    out += "Z/" + to_string(d);
  }
  return out.empty() ? "0" : out;
}

}  // namespace kenv
