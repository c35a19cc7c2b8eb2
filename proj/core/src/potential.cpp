#include "kenv/potential.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>

namespace kenv {

Potential::Potential(int n, int m, std::vector<Polynomial> equations,
                     std::optional<GradingScheme> grading)
    : lay_{n, m}, equations_(std::move(equations)) {
  if (n <= 0 || m <= 0) throw std::invalid_argument("potential needs n >= 1 and m >= 1");
  if (static_cast<int>(equations_.size()) != m)
    throw std::invalid_argument("expected " + std::to_string(m) + " equations");

  for (int j = 0; j < m; ++j) {
    const Polynomial& w = equations_[j];
    if (w.is_zero()) throw std::invalid_argument("W" + std::to_string(j + 1) + " is zero");
    for (Block b : {Block::E, Block::Z, Block::W}) {
      if (w.uses_block(b))
        throw std::invalid_argument("W" + std::to_string(j + 1) + " must lie in Sym(V*)");
    }
    if (w.min_block_degree(Block::X) < 1)
      throw std::invalid_argument("W" + std::to_string(j + 1) + " has a constant term");
    if (w.min_block_degree(Block::X) < 2) no_linear_ = false;
  }

  if (grading) {
    grading_ = std::move(*grading);
    if (static_cast<int>(grading_.alpha.size()) != n || static_cast<int>(grading_.beta.size()) != m)
      throw std::invalid_argument("grading must provide n alphas and m betas");
  } else {
    GroupPtr z = AbelianGroup::free_group(1);
    grading_.group = z;
    for (int i = 0; i < n; ++i) grading_.alpha.push_back(z->degree({Int(1)}));
    for (int j = 0; j < m; ++j) {
      const Polynomial& w = equations_[j];
      int d = w.max_block_degree(Block::X);
      if (d != w.min_block_degree(Block::X))
        throw std::invalid_argument("W" + std::to_string(j + 1) +
                                    " is not homogeneous; an explicit grading is required");
      grading_.beta.push_back(z->degree({Int(d)}));
    }
  }

  // Homogeneity of each equation against its declared degree.
  for (int j = 0; j < m; ++j) {
    auto d = a_degree(equations_[j]);
    if (!d || !(*d == grading_.beta[j]))
      throw std::invalid_argument("W" + std::to_string(j + 1) +
                                  " is not A-homogeneous of its declared degree");
  }

  auto phi = pointedness_functional(grading_.alpha);
  if (!phi)
    throw std::invalid_argument(
        "variable degrees do not span a pointed cone; graded components would be "
        "infinite dimensional");
  phi_ = *phi;

  // total potential and its quadratic / higher split
  total_ = Polynomial(lay_);
  for (int j = 0; j < m; ++j) {
    total_ += equations_[j] * Polynomial::variable(lay_, Block::Z, j);
  }
  quad_ = total_.filter([](const Monomial& mo) { return mo.block_degree(Block::X) == 2; });
  higher_ = total_.filter([](const Monomial& mo) { return mo.block_degree(Block::X) >= 3; });

  // l_2 table
  l2_.assign(n, std::vector<QVec>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) l2_[i][j] = l_k({i, j});
}

void Potential::require_no_linear_terms(const char* who) const {
  if (!no_linear_)
    throw std::invalid_argument(std::string(who) +
                                " requires equations without linear terms (Sym^{>=2})");
}

Degree Potential::a_degree(const Monomial& mono) const {
  Degree d = grading_.group->zero();
  for (int i = 0; i < lay_.n; ++i) {
    if (int e = mono.exp(Block::X, i)) d = d + grading_.alpha[i] * e;
    if (int e = mono.exp(Block::E, i)) d = d - grading_.alpha[i] * e;
  }
  for (int j = 0; j < lay_.m; ++j) {
    if (int e = mono.exp(Block::Z, j)) d = d - grading_.beta[j] * e;
    if (int e = mono.exp(Block::W, j)) d = d + grading_.beta[j] * e;
  }
  return d;
}

std::optional<Degree> Potential::a_degree(const Polynomial& p) const {
  if (p.is_zero()) return std::nullopt;
  std::optional<Degree> deg;
  for (const auto& [mono, c] : p.terms()) {
    Degree d = a_degree(mono);
    if (!deg) {
      deg = d;
    } else if (!(*deg == d)) {
      throw std::invalid_argument("polynomial is not A-homogeneous: " + p.str());
    }
  }
  return deg;
}

QVec Potential::l_k(const std::vector<int>& vs) const {
  Monomial op(lay_);
  for (int v : vs) op.set_exp(Block::E, v, op.exp(Block::E, v) + 1);
  Polynomial derivative = diff_apply(Polynomial::monomial(op, Scalar(1)), total_);
  QVec out(lay_.m, Scalar(0));
  for (const auto& [mono, c] : derivative.terms()) {
    if (mono.block_degree(Block::X) != 0) continue;  // evaluate at 0
    for (int j = 0; j < lay_.m; ++j) {
      if (mono.exp(Block::Z, j) == 1) out[j] += c;
    }
  }
  return out;
}

Scalar Potential::phi_of(const Degree& d) const {
  Scalar v(0);
  for (size_t j = 0; j < phi_.size(); ++j) v += phi_[j] * Scalar(d.free_part()[j]);
  return v;
}

const std::vector<Monomial>& Potential::x_monomials_of_degree(const Degree& d) const {
  std::scoped_lock lock(cache_mutex_);
  auto it = x_mono_cache_.find(d);
  if (it != x_mono_cache_.end()) return it->second;

  std::vector<Monomial> result;
  Scalar budget = phi_of(d);
  if (sgn(budget) >= 0) {
    Monomial cur(lay_);
    std::function<void(int, Degree, Scalar)> dfs = [&](int i, Degree acc, Scalar phi_acc) {
      if (i == lay_.n) {
        if (acc == d) result.push_back(cur);
        return;
      }
      Scalar step = phi_of(grading_.alpha[i]);
      for (int e = 0;; ++e) {
        Scalar pa = phi_acc + Scalar(e) * step;
        if (pa > budget) break;
        cur.set_exp(Block::X, i, e);
        dfs(i + 1, e == 0 ? acc : acc + grading_.alpha[i] * e, pa);
      }
      cur.set_exp(Block::X, i, 0);
    };
    dfs(0, grading_.group->zero(), Scalar(0));
  }
  // canonical order
  std::sort(result.begin(), result.end());
  auto [pos, ok] = x_mono_cache_.emplace(d, std::move(result));
  (void)ok;
  return pos->second;
}

std::vector<Monomial> Potential::e_monomials_of_degree(const Degree& d) const {
  const auto& xs = x_monomials_of_degree(-d);
  std::vector<Monomial> out;
  out.reserve(xs.size());
  for (const auto& xm : xs) {
    Monomial em(lay_);
    for (int i = 0; i < lay_.n; ++i) em.set_exp(Block::E, i, xm.exp(Block::X, i));
    out.push_back(em);
  }
  return out;
}

}  // namespace kenv
