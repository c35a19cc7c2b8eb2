#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "kenv/potential.hpp"
#include "kenv/symword.hpp"

namespace kenv {

// Elements of E_W = Lambda(V) (x) Sym(U) are plain polynomials in e_i, z_j
// with square-free e-exponents.
bool is_ew_element(const Polynomial& p);

// Homological degree of an E_W monomial: e_i count + 2 * z-degree.
int ew_hdeg(const Monomial& mono);

// The A-infinity algebra E_W attached to a potential: PBW product, the
// symmetric-bialgebra contraction, the two perturbation passes, and the
// higher products evaluated on demand. All conventions here are pinned by
// the identity tests (delta^2, contraction, Stasheff); see
// docs/conventions.md.
class EwAlgebra {
 public:
  explicit EwAlgebra(std::shared_ptr<const Potential> pot);

  const Potential& pot() const { return *pot_; }

  // ---- U(L_2) structure on normalized words -------------------------------

  // Bracket of two odd factors, as a sum of even single factors.
  std::vector<std::pair<SymFactor, Scalar>> bracket(const SymFactor& a, const SymFactor& b) const;

  // rho(a) * rho(b): the universal-enveloping product through the PBW
  // identification (signed subset sum with the half-bracket determinant).
  SymExpr pbw_product(const SymWord& a, const SymWord& b) const;

  // rho(a . b): plain graded-symmetric merge.
  SymExpr sym_merge(const SymWord& a, const SymWord& b) const;

  // delta_U(a (x) b) = rho(a) * rho(b) - rho(a . b).
  SymExpr delta_u(const SymWord& a, const SymWord& b) const;

  // ---- contraction (F_sym, G_sym, H_sym) ----------------------------------

  // F_sym kills words with Koszul factors and renames Ghat/UGen to e/z.
  Polynomial f_sym(const SymWord& w, const Scalar& coeff) const;
  Polynomial f_sym(const SymExpr& e) const;
  // G_sym of an E_W basis monomial.
  SymWord g_sym(const Monomial& ew_mono) const;
  // G_sym F_sym: identity on pure-L words, zero otherwise.
  bool gf_alive(const SymWord& w) const { return w.pure_l(); }
  // H_sym = (normalized derivation  [g] -> -{g}) / koszul weight.
  SymExpr h_sym(const SymWord& w) const;

  // ---- bar-level operators (single application, memoized) -----------------

  BarExpr h_prime(const BarWord& w) const;       // H_B'
  BarExpr delta_b(const BarWord& w) const;       // coderivation of delta_U
  BarExpr delta_tilde(const BarWord& w) const;   // coderivation of delta_tilde_U
  BarExpr apply_h_prime(const BarExpr& e) const;
  BarExpr apply_delta_b(const BarExpr& e) const;
  BarExpr apply_delta_tilde(const BarExpr& e) const;

  // delta_tilde_U on one word (derivation over Ghat factors).
  SymExpr delta_tilde_u(const SymWord& w) const;

  // First-pass inner differential (derivation {f} -> -[f]); used by the
  // contraction identity tests.
  SymExpr d_sym(const SymWord& w) const;

  // ---- higher products -----------------------------------------------------

  // mu_n for n >= 2; arity 2 is the PBW product, arity >= 3 evaluates the
  // perturbation-series formula. Arguments and result are E_W elements.
  Polynomial mu(const std::vector<Polynomial>& args) const;

  // Independent evaluator: per-history depth-first sum over decorated
  // planar trees (single-slot operator applications, no intermediate
  // aggregation). Must agree with mu() exactly.
  Polynomial mu_tree(const std::vector<Polynomial>& args) const;

  // Number of slot-choice histories (decorated planar trees weighted by
  // their schedules) that contributed the last time mu_tree ran.
  // For reporting only.
  struct TreeStats {
    long histories = 0;
    long distinct_trees = 0;
  };
  Polynomial mu_tree(const std::vector<Polynomial>& args, TreeStats* stats) const;

 private:
  std::shared_ptr<const Potential> pot_;
  // delta_tilde_U(Ghat_i) = [corr-derivative_i(W - W^(2))], precomputed per i
  // as a list of Bracket factors with coefficients.
  std::vector<std::vector<std::pair<SymFactor, Scalar>>> dtable_;

  Polynomial mu2(const Polynomial& a, const Polynomial& b) const;
  Polynomial mu_eval(const BarWord& start) const;

  mutable std::mutex memo_mutex_;
  mutable std::unordered_map<BarWord, BarExpr, BarWordHash> memo_hprime_;
  mutable std::unordered_map<BarWord, BarExpr, BarWordHash> memo_deltab_;
  mutable std::unordered_map<BarWord, BarExpr, BarWordHash> memo_deltat_;
  mutable std::unordered_map<BarWord, Polynomial, BarWordHash> memo_mu_;
};

// ---- Stasheff identity checker ---------------------------------------------

struct StasheffReport {
  bool passed = true;
  long identities_checked = 0;
  std::string first_counterexample;
};

// Checks that the coderivation assembled from the mu_n squares to zero on
// every tuple: for each total arity N in [3, max_arity], evaluates all
// double compositions sum +- mu(1,..,mu,..,1) on the given argument tuples.
// Residuals must vanish identically.
StasheffReport check_stasheff(const EwAlgebra& ew, int max_arity,
                              const std::vector<std::vector<Polynomial>>& tuples);

// Exhaustive V-basis tuples plus reproducible random E_W monomial tuples
// for the given arity.
std::vector<std::vector<Polynomial>> stasheff_tuple_pool(const EwAlgebra& ew, int arity,
                                                         int random_count, unsigned seed);

}  // namespace kenv
