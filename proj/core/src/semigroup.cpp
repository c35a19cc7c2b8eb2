#include "kenv/semigroup.hpp"

#include <functional>
#include <stdexcept>

namespace kenv {

std::string to_string(SemigroupVerdict v) {
  switch (v) {
    case SemigroupVerdict::ProvedIn: return "proved-in";
    case SemigroupVerdict::ProvedOut: return "proved-out";
    case SemigroupVerdict::UnknownWithinBound: return "unknown-within-bound";
  }
  return "?";
}

std::optional<QVec> pointedness_functional(const std::vector<Degree>& alphas) {
  if (alphas.empty()) return QVec{};
  size_t r = alphas[0].free_part().size();
  QMat rows;
  QVec rhs;
  for (const auto& a : alphas) {
    QVec row(r);
    bool all_zero = true;
    for (size_t j = 0; j < r; ++j) {
      row[j] = Scalar(a.free_part()[j]);
      if (a.free_part()[j] != 0) all_zero = false;
    }
    if (all_zero) return std::nullopt;  // pure-torsion generator: cone not pointed
    rows.push_back(std::move(row));
    rhs.push_back(Scalar(1));
  }
  return fourier_motzkin_solve(rows, rhs);
}

namespace {

Scalar phi_value(const QVec& phi, const Degree& d) {
  Scalar v(0);
  for (size_t j = 0; j < phi.size(); ++j) v += phi[j] * Scalar(d.free_part()[j]);
  return v;
}

}  // namespace

SemigroupCheck semigroup_window_check(const Bidegree& bidegree, const std::vector<Degree>& alphas,
                                      const Bidegree& gamma, int bound) {
  if (bound < 0) throw std::invalid_argument("bound must be nonnegative");
  SemigroupCheck out;
  Degree delta = bidegree.a - gamma.a;
  int hneed = bidegree.h - gamma.h;
  if (hneed < 0) {
    out.verdict = SemigroupVerdict::ProvedOut;
    return out;
  }
  auto phi = pointedness_functional(alphas);
  if (!phi) throw std::invalid_argument("grading cone is not pointed; semigroup test unavailable");

  Degree target = -delta;  // want sum c_i alpha_i = -delta with sum c_i >= hneed
  Scalar phi_target = phi_value(*phi, target);
  if (sgn(phi_target) < 0) {
    out.verdict = SemigroupVerdict::ProvedOut;  // rational relaxation excludes it
    return out;
  }
  // phi(alpha_i) >= 1, so any solution has total count <= phi_target.
  long complete_budget = -1;
  {
    Scalar b = phi_target;  // floor
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), b.get_num().get_mpz_t(), b.get_den().get_mpz_t());
    complete_budget = fl.get_si();
  }
  bool complete = complete_budget <= bound;
  int budget = complete ? static_cast<int>(complete_budget) : bound;

  std::vector<Scalar> phi_alpha;
  for (const auto& a : alphas) phi_alpha.push_back(phi_value(*phi, a));

  int best_total = -1;
  std::vector<int> current(alphas.size(), 0), best;
  // DFS with exact phi-budget pruning.
  std::function<void(size_t, Degree, Scalar, int)> dfs = [&](size_t i, Degree acc, Scalar phi_acc,
                                                             int used) {
    if (phi_acc > phi_target) return;
    if (i == alphas.size()) {
      if (acc == target && used > best_total) {
        best_total = used;
        best = current;
      }
      return;
    }
    for (int c = 0; used + c <= budget; ++c) {
      Scalar pa = phi_acc + Scalar(c) * phi_alpha[i];
      if (pa > phi_target) break;
      current[i] = c;
      dfs(i + 1, c == 0 ? acc : acc + alphas[i] * c, pa, used + c);
    }
    current[i] = 0;
  };
  dfs(0, target.group()->zero(), Scalar(0), 0);

  if (best_total >= hneed) {
    out.verdict = SemigroupVerdict::ProvedIn;
    out.witness = best;
  } else if (complete) {
    out.verdict = SemigroupVerdict::ProvedOut;
  } else {
    out.verdict = SemigroupVerdict::UnknownWithinBound;
  }
  return out;
}

}  // namespace kenv
