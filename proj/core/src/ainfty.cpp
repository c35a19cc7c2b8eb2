#include "kenv/ainfty.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <stdexcept>

namespace kenv {

bool is_ew_element(const Polynomial& p) {
  for (const auto& [mono, c] : p.terms()) {
    if (mono.uses_block(Block::X) || mono.uses_block(Block::W)) return false;
    for (int i = 0; i < mono.block_size(Block::E); ++i)
      if (mono.exp(Block::E, i) > 1) return false;
  }
  return true;
}

int ew_hdeg(const Monomial& mono) {
  return mono.block_degree(Block::E) + 2 * mono.block_degree(Block::Z);
}

EwAlgebra::EwAlgebra(std::shared_ptr<const Potential> pot) : pot_(std::move(pot)) {
  pot_->require_no_linear_terms("EwAlgebra");
  dtable_.resize(pot_->n());
  for (int i = 0; i < pot_->n(); ++i) {
    Polynomial d = corrected_derivative(i, pot_->higher_part());
    for (const auto& [mono, c] : d.terms()) {
      std::vector<int32_t> a(pot_->n());
      for (int t = 0; t < pot_->n(); ++t) a[t] = mono.exp(Block::X, t);
      int j = -1;
      for (int t = 0; t < pot_->m(); ++t)
        if (mono.exp(Block::Z, t) == 1) j = t;
      dtable_[i].emplace_back(SymFactor::bracket(std::move(a), j), c);
    }
  }
}

std::vector<std::pair<SymFactor, Scalar>> EwAlgebra::bracket(const SymFactor& a,
                                                             const SymFactor& b) const {
  if (!a.odd() || !b.odd()) throw std::invalid_argument("bracket expects odd factors");
  std::vector<std::pair<SymFactor, Scalar>> out;
  auto ghat_brace = [&](int i, const SymFactor& s) {
    int ai = s.xexp[i];
    if (ai == 0) return;
    int total = 0;
    for (auto e : s.xexp) total += e;
    Scalar c = Scalar(ai) / Scalar(total);
    if (total == 1) {
      out.emplace_back(SymFactor::ugen(s.idx), c);
    } else {
      auto xe = s.xexp;
      xe[i] -= 1;
      out.emplace_back(SymFactor::bracket(std::move(xe), s.idx), c);
    }
  };
  if (a.kind == FactorKind::Ghat && b.kind == FactorKind::Ghat) {
    const QVec& l2 = pot_->l2(a.idx, b.idx);
    for (int j = 0; j < pot_->m(); ++j)
      if (!is_zero(l2[j])) out.emplace_back(SymFactor::ugen(j), l2[j]);
  } else if (a.kind == FactorKind::Ghat && b.kind == FactorKind::Brace) {
    ghat_brace(a.idx, b);
  } else if (a.kind == FactorKind::Brace && b.kind == FactorKind::Ghat) {
    ghat_brace(b.idx, a);
  }
  // Brace-Brace: the S-copies are central, bracket vanishes.
  return out;
}

namespace {

void split_word(const SymWord& w, std::vector<SymFactor>& odds, std::vector<SymFactor>& evens) {
  for (const auto& f : w.fs) (f.odd() ? odds : evens).push_back(f);
}

// Parity of the permutation sending 0..(sz-1) to `target` (a permutation of
// position indices).
int permutation_sign(const std::vector<int>& target) {
  int inv = 0;
  for (size_t i = 0; i < target.size(); ++i)
    for (size_t j = i + 1; j < target.size(); ++j)
      if (target[i] > target[j]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

using EvenPoly = std::map<std::vector<SymFactor>, Scalar>;  // products of even factors

void even_add(EvenPoly& e, std::vector<SymFactor> fs, const Scalar& c) {
  if (is_zero(c)) return;
  std::sort(fs.begin(), fs.end());
  auto [it, inserted] = e.emplace(std::move(fs), c);
  if (!inserted) {
    it->second += c;
    if (is_zero(it->second)) e.erase(it);
  }
}

EvenPoly even_mul(const EvenPoly& a, const EvenPoly& b) {
  EvenPoly out;
  for (const auto& [fa, ca] : a)
    for (const auto& [fb, cb] : b) {
      auto fs = fa;
      fs.insert(fs.end(), fb.begin(), fb.end());
      even_add(out, std::move(fs), ca * cb);
    }
  return out;
}

}  // namespace

SymExpr EwAlgebra::sym_merge(const SymWord& a, const SymWord& b) const {
  SymExpr out;
  std::vector<SymFactor> fs = a.fs;
  fs.insert(fs.end(), b.fs.begin(), b.fs.end());
  if (auto norm = normalize_word(std::move(fs))) {
    add_term(out, norm->first, Scalar(norm->second));
  }
  return out;
}

namespace {

std::vector<std::vector<int>> subsets_of(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int from) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = from; i <= n - (k - static_cast<int>(cur.size())); ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

}  // namespace

// rho(a) * rho(b) as the signed sum over equal-size subsets I, J of the odd
// factors, with the half-bracket determinant on the consumed pairs. Even
// factors are central and pass through.
SymExpr EwAlgebra::pbw_product(const SymWord& a, const SymWord& b) const {
  SymExpr out;
  std::vector<SymFactor> va, ea, vb, eb;
  split_word(a, va, ea);
  split_word(b, vb, eb);
  const int p = static_cast<int>(va.size()), q = static_cast<int>(vb.size());
  const int kmax = std::min(p, q);

  for (int k = 0; k <= kmax; ++k) {
    for (const auto& isub : subsets_of(p, k)) {
      for (const auto& jsub : subsets_of(q, k)) {
        // determinant of the half-bracket matrix over I x J
        EvenPoly det;
        if (k == 0) {
          even_add(det, {}, Scalar(1));
        } else {
          std::vector<std::vector<EvenPoly>> mat(k, std::vector<EvenPoly>(k));
          bool dead_row = false;
          for (int r = 0; r < k && !dead_row; ++r) {
            bool nonzero = false;
            for (int c = 0; c < k; ++c) {
              for (auto& [f, co] : bracket(va[isub[r]], vb[jsub[c]]))
                even_add(mat[r][c], {f}, co / 2);
              nonzero = nonzero || !mat[r][c].empty();
            }
            dead_row = !nonzero;
          }
          if (dead_row) continue;
          std::vector<int> perm(k);
          for (int i = 0; i < k; ++i) perm[i] = i;
          do {
            EvenPoly prod;
            even_add(prod, {}, Scalar(permutation_sign(perm)));
            bool dead = false;
            for (int r = 0; r < k && !dead; ++r) {
              if (mat[r][perm[r]].empty()) dead = true;
              else prod = even_mul(prod, mat[r][perm[r]]);
            }
            if (!dead)
              for (const auto& [fs, c] : prod) even_add(det, fs, c);
          } while (std::next_permutation(perm.begin(), perm.end()));
        }
        if (det.empty()) continue;

        // Koszul sign of reordering v_1..v_p w_1..w_q into
        // [v not in I][I descending][J ascending][w not in J].
        std::vector<int> target;
        std::vector<bool> in_i(p, false), in_j(q, false);
        for (int i : isub) in_i[i] = true;
        for (int j : jsub) in_j[j] = true;
        for (int i = 0; i < p; ++i)
          if (!in_i[i]) target.push_back(i);
        for (int t = k - 1; t >= 0; --t) target.push_back(isub[t]);
        for (int t = 0; t < k; ++t) target.push_back(p + jsub[t]);
        for (int j = 0; j < q; ++j)
          if (!in_j[j]) target.push_back(p + j);
        Scalar subset_sign(permutation_sign(target));

        // remaining odd word plus all even factors
        std::vector<SymFactor> rest;
        for (int i = 0; i < p; ++i)
          if (!in_i[i]) rest.push_back(va[i]);
        for (int j = 0; j < q; ++j)
          if (!in_j[j]) rest.push_back(vb[j]);
        rest.insert(rest.end(), ea.begin(), ea.end());
        rest.insert(rest.end(), eb.begin(), eb.end());

        for (const auto& [dfs, dc] : det) {
          auto fs = rest;
          fs.insert(fs.end(), dfs.begin(), dfs.end());
          if (auto norm = normalize_word(std::move(fs))) {
            add_term(out, norm->first, subset_sign * dc * Scalar(norm->second));
          }
        }
      }
    }
  }
  return out;
}

SymExpr EwAlgebra::delta_u(const SymWord& a, const SymWord& b) const {
  SymExpr out = pbw_product(a, b);
  for (const auto& [w, c] : sym_merge(a, b)) add_term(out, w, -c);
  return out;
}

Polynomial EwAlgebra::f_sym(const SymWord& w, const Scalar& coeff) const {
  Polynomial out(pot_->layout());
  if (w.koszul_weight() > 0) return out;
  Monomial mono(pot_->layout());
  for (const auto& f : w.fs) {
    if (f.kind == FactorKind::Ghat) mono.set_exp(Block::E, f.idx, 1);
    else mono.set_exp(Block::Z, f.idx, mono.exp(Block::Z, f.idx) + 1);
  }
  out.add_term(mono, coeff);
  return out;
}

Polynomial EwAlgebra::f_sym(const SymExpr& e) const {
  Polynomial out(pot_->layout());
  for (const auto& [w, c] : e) out += f_sym(w, c);
  return out;
}

SymWord EwAlgebra::g_sym(const Monomial& ew_mono) const {
  std::vector<SymFactor> fs;
  for (int i = 0; i < pot_->n(); ++i) {
    int e = ew_mono.exp(Block::E, i);
    if (e > 1) throw std::invalid_argument("not an E_W monomial (e-exponent > 1)");
    if (e == 1) fs.push_back(SymFactor::ghat(i));
  }
  for (int j = 0; j < pot_->m(); ++j)
    for (int t = 0; t < ew_mono.exp(Block::Z, j); ++t) fs.push_back(SymFactor::ugen(j));
  return SymWord{std::move(fs)};  // already sorted
}

SymExpr EwAlgebra::h_sym(const SymWord& w) const {
  SymExpr out;
  int weight = w.koszul_weight();
  if (weight == 0) return out;
  int odds = 0;
  for (const auto& f : w.fs)
    if (f.odd()) ++odds;
  Scalar norm = Scalar(-1) / Scalar(weight);  // the derivation sends [g] to -{g}
  Scalar pass = (odds % 2 == 0) ? Scalar(1) : Scalar(-1);
  for (size_t t = 0; t < w.fs.size(); ++t) {
    if (w.fs[t].kind != FactorKind::Bracket) continue;
    auto fs = w.fs;
    fs[t].kind = FactorKind::Brace;
    if (auto nw = normalize_word(std::move(fs))) {
      add_term(out, nw->first, norm * pass * Scalar(nw->second));
    }
  }
  return out;
}

SymExpr EwAlgebra::d_sym(const SymWord& w) const {
  SymExpr out;
  for (size_t t = 0; t < w.fs.size(); ++t) {
    if (w.fs[t].kind != FactorKind::Brace) continue;
    // all factors before a Brace are odd in sorted order
    Scalar sign = (t % 2 == 0) ? Scalar(1) : Scalar(-1);
    auto fs = w.fs;
    fs[t].kind = FactorKind::Bracket;
    if (auto nw = normalize_word(std::move(fs))) {
      add_term(out, nw->first, Scalar(-1) * sign * Scalar(nw->second));
    }
  }
  return out;
}

SymExpr EwAlgebra::delta_tilde_u(const SymWord& w) const {
  SymExpr out;
  for (size_t t = 0; t < w.fs.size(); ++t) {
    if (w.fs[t].kind != FactorKind::Ghat) continue;
    Scalar sign = (t % 2 == 0) ? Scalar(1) : Scalar(-1);  // Ghats lead the sorted word
    for (const auto& [rep, c] : dtable_[w.fs[t].idx]) {
      auto fs = w.fs;
      fs[t] = rep;
      if (auto nw = normalize_word(std::move(fs))) {
        add_term(out, nw->first, sign * c * Scalar(nw->second));
      }
    }
  }
  return out;
}

namespace {

Scalar prefix_sign(const BarWord& w, size_t upto) {
  int par = 0;
  for (size_t j = 0; j < upto; ++j) par ^= w.slots[j].shifted_parity();
  return par ? Scalar(-1) : Scalar(1);
}

}  // namespace

BarExpr EwAlgebra::h_prime(const BarWord& w) const {
  {
    std::scoped_lock lock(memo_mutex_);
    if (auto it = memo_hprime_.find(w); it != memo_hprime_.end()) return it->second;
  }
  BarExpr out;
  size_t t = w.length();
  // suffix_pure[i] = slots i..t-1 all survive G_sym F_sym
  std::vector<bool> suffix_pure(t + 1, true);
  for (size_t i = t; i-- > 0;) suffix_pure[i] = suffix_pure[i + 1] && w.slots[i].pure_l();
  for (size_t i = 0; i < t; ++i) {
    if (!suffix_pure[i + 1]) continue;
    SymExpr h = h_sym(w.slots[i]);
    if (h.empty()) continue;
    Scalar sign = prefix_sign(w, i);
    for (const auto& [hw, hc] : h) {
      BarWord nw = w;
      nw.slots[i] = hw;
      add_term(out, nw, sign * hc);
    }
  }
  std::scoped_lock lock(memo_mutex_);
  return memo_hprime_.emplace(w, std::move(out)).first->second;
}

BarExpr EwAlgebra::delta_b(const BarWord& w) const {
  {
    std::scoped_lock lock(memo_mutex_);
    if (auto it = memo_deltab_.find(w); it != memo_deltab_.end()) return it->second;
  }
  BarExpr out;
  for (size_t i = 0; i + 1 < w.length(); ++i) {
    SymExpr d = delta_u(w.slots[i], w.slots[i + 1]);
    if (d.empty()) continue;
    // prefix Koszul sign plus the suspension sign of the merged slot; the
    // latter is what makes the merge anticommute with the slotwise parts
    Scalar sign = prefix_sign(w, i + 1);
    for (const auto& [dw, dc] : d) {
      if (dw.empty()) throw std::logic_error("delta_U produced a unit term");
      BarWord nw;
      nw.slots.reserve(w.length() - 1);
      for (size_t j = 0; j < i; ++j) nw.slots.push_back(w.slots[j]);
      nw.slots.push_back(dw);
      for (size_t j = i + 2; j < w.length(); ++j) nw.slots.push_back(w.slots[j]);
      add_term(out, nw, sign * dc);
    }
  }
  std::scoped_lock lock(memo_mutex_);
  return memo_deltab_.emplace(w, std::move(out)).first->second;
}

BarExpr EwAlgebra::delta_tilde(const BarWord& w) const {
  {
    std::scoped_lock lock(memo_mutex_);
    if (auto it = memo_deltat_.find(w); it != memo_deltat_.end()) return it->second;
  }
  BarExpr out;
  for (size_t i = 0; i < w.length(); ++i) {
    SymExpr d = delta_tilde_u(w.slots[i]);
    if (d.empty()) continue;
    Scalar sign = prefix_sign(w, i);
    for (const auto& [dw, dc] : d) {
      BarWord nw = w;
      nw.slots[i] = dw;
      // termination certificate: every perturbation step must consume a Ghat
      if (nw.vcount() != w.vcount() - 1)
        throw std::logic_error("delta_tilde failed to decrease the V-count");
      add_term(out, nw, sign * dc);
    }
  }
  std::scoped_lock lock(memo_mutex_);
  return memo_deltat_.emplace(w, std::move(out)).first->second;
}

BarExpr EwAlgebra::apply_h_prime(const BarExpr& e) const {
  BarExpr out;
  for (const auto& [w, c] : e)
    for (const auto& [rw, rc] : h_prime(w)) add_term(out, rw, c * rc);
  return out;
}

BarExpr EwAlgebra::apply_delta_b(const BarExpr& e) const {
  BarExpr out;
  for (const auto& [w, c] : e)
    for (const auto& [rw, rc] : delta_b(w)) add_term(out, rw, c * rc);
  return out;
}

BarExpr EwAlgebra::apply_delta_tilde(const BarExpr& e) const {
  BarExpr out;
  for (const auto& [w, c] : e)
    for (const auto& [rw, rc] : delta_tilde(w)) add_term(out, rw, c * rc);
  return out;
}

Polynomial EwAlgebra::mu2(const Polynomial& a, const Polynomial& b) const {
  Polynomial out(pot_->layout());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      SymExpr prod = pbw_product(g_sym(ma), g_sym(mb));
      out += f_sym(prod) * (ca * cb);
    }
  return out;
}

Polynomial EwAlgebra::mu_eval(const BarWord& start) const {
  {
    std::scoped_lock lock(memo_mutex_);
    if (auto it = memo_mu_.find(start); it != memo_mu_.end()) return it->second;
  }
  const int n = static_cast<int>(start.length());
  const int quota = n - 2;
  Polynomial acc(pot_->layout());

  // (-1)^(k-1) where k counts the delta_B / delta_tilde slots applied.
  auto series_sign = [](int k) { return k % 2 == 1 ? Scalar(1) : Scalar(-1); };

  std::function<void(const BarExpr&, int, int)> recurse = [&](const BarExpr& state, int used_b,
                                                              int ops) {
    if (state.empty()) return;
    BarExpr h = apply_h_prime(state);
    if (h.empty()) return;
    if (used_b == quota) {
      for (const auto& [w, c] : h) {
        if (w.length() != 2) continue;
        SymExpr d = delta_u(w.slots[0], w.slots[1]);
        Scalar susp = w.slots[0].shifted_parity() ? Scalar(-1) : Scalar(1);
        if (!d.empty()) acc += f_sym(d) * (series_sign(ops) * susp * c);
      }
    }
    if (used_b < quota) recurse(apply_delta_b(h), used_b + 1, ops + 1);
    recurse(apply_delta_tilde(h), used_b, ops + 1);
  };

  recurse(delta_tilde(start), 0, 0);

  std::scoped_lock lock(memo_mutex_);
  return memo_mu_.emplace(start, std::move(acc)).first->second;
}

namespace {

// Reduced arguments for higher products: the units are dropped (strict
// unitality), everything else expanded over basis monomials.
std::vector<std::pair<Monomial, Scalar>> reduced_terms(const Polynomial& p) {
  std::vector<std::pair<Monomial, Scalar>> out;
  for (const auto& [mono, c] : p.terms()) {
    if (mono.is_constant()) continue;
    out.emplace_back(mono, c);
  }
  return out;
}

}  // namespace

Polynomial EwAlgebra::mu(const std::vector<Polynomial>& args) const {
  if (args.size() < 2) throw std::invalid_argument("mu needs arity >= 2");
  for (const auto& a : args)
    if (!is_ew_element(a)) throw std::invalid_argument("mu arguments must be E_W elements");
  if (args.size() == 2) return mu2(args[0], args[1]);

  Polynomial out(pot_->layout());
  std::vector<std::vector<std::pair<Monomial, Scalar>>> expansions;
  for (const auto& a : args) {
    expansions.push_back(reduced_terms(a));
    if (expansions.back().empty()) return out;
  }
  std::vector<size_t> pick(args.size(), 0);
  for (;;) {
    Scalar coeff(1);
    BarWord start;
    for (size_t i = 0; i < args.size(); ++i) {
      const auto& [mono, c] = expansions[i][pick[i]];
      coeff *= c;
      start.slots.push_back(g_sym(mono));
    }
    out += mu_eval(start) * coeff;
    size_t i = 0;
    while (i < pick.size() && ++pick[i] == expansions[i].size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
  return out;
}

Polynomial EwAlgebra::mu_tree(const std::vector<Polynomial>& args) const {
  return mu_tree(args, nullptr);
}

Polynomial EwAlgebra::mu_tree(const std::vector<Polynomial>& args, TreeStats* stats) const {
  if (args.size() < 2) throw std::invalid_argument("mu needs arity >= 2");
  if (args.size() == 2) return mu2(args[0], args[1]);
  const int n = static_cast<int>(args.size());
  const int quota = n - 2;
  Polynomial acc(pot_->layout());
  std::set<std::string> shapes;
  long histories = 0;

  auto series_sign = [](int k) { return k % 2 == 1 ? Scalar(1) : Scalar(-1); };

  // Per-history DFS: a history fixes the slot of every operator application
  // (the decorated planar tree); values are summed with no intermediate
  // cancellation. `shape` tracks the tree structure of merges and unary
  // vertices for reporting.
  std::function<void(const BarWord&, const Scalar&, std::vector<std::string>&, int, int)>
      after_h;  // declared below

  std::function<void(const BarWord&, const Scalar&, std::vector<std::string>&, int, int)>
      after_op = [&](const BarWord& w, const Scalar& c, std::vector<std::string>& shape,
                     int used_b, int ops) {
        size_t t = w.length();
        std::vector<bool> suffix_pure(t + 1, true);
        for (size_t i = t; i-- > 0;) suffix_pure[i] = suffix_pure[i + 1] && w.slots[i].pure_l();
        for (size_t i = 0; i < t; ++i) {
          if (!suffix_pure[i + 1]) continue;
          SymExpr h = h_sym(w.slots[i]);
          if (h.empty()) continue;
          Scalar sign = prefix_sign(w, i);
          for (const auto& [hw, hc] : h) {
            BarWord nw = w;
            nw.slots[i] = hw;
            after_h(nw, c * sign * hc, shape, used_b, ops);
          }
        }
      };

  after_h = [&](const BarWord& w, const Scalar& c, std::vector<std::string>& shape, int used_b,
                int ops) {
    if (used_b == quota && w.length() == 2) {
      SymExpr d = delta_u(w.slots[0], w.slots[1]);
      Scalar susp = w.slots[0].shifted_parity() ? Scalar(-1) : Scalar(1);
      if (!d.empty()) {
        acc += f_sym(d) * (series_sign(ops) * susp * c);
        ++histories;
        shapes.insert("R(" + shape[0] + "," + shape[1] + ")");
      }
    }
    if (used_b < quota && w.length() >= 2) {
      for (size_t i = 0; i + 1 < w.length(); ++i) {
        SymExpr d = delta_u(w.slots[i], w.slots[i + 1]);
        if (d.empty()) continue;
        Scalar sign = prefix_sign(w, i + 1);
        std::vector<std::string> nshape;
        for (size_t j = 0; j < shape.size(); ++j) {
          if (j == i) {
            nshape.push_back("B(" + shape[i] + "," + shape[i + 1] + ")");
          } else if (j != i + 1) {
            nshape.push_back(shape[j]);
          }
        }
        for (const auto& [dw, dc] : d) {
          BarWord nw;
          for (size_t j = 0; j < i; ++j) nw.slots.push_back(w.slots[j]);
          nw.slots.push_back(dw);
          for (size_t j = i + 2; j < w.length(); ++j) nw.slots.push_back(w.slots[j]);
          after_op(nw, c * sign * dc, nshape, used_b + 1, ops + 1);
        }
      }
    }
    for (size_t i = 0; i < w.length(); ++i) {
      SymExpr d = delta_tilde_u(w.slots[i]);
      if (d.empty()) continue;
      Scalar sign = prefix_sign(w, i);
      std::vector<std::string> nshape = shape;
      nshape[i] = "T(" + shape[i] + ")";
      for (const auto& [dw, dc] : d) {
        BarWord nw = w;
        nw.slots[i] = dw;
        after_op(nw, c * sign * dc, nshape, used_b, ops + 1);
      }
    }
  };

  std::vector<std::vector<std::pair<Monomial, Scalar>>> expansions;
  for (const auto& a : args) {
    expansions.push_back(reduced_terms(a));
    if (expansions.back().empty()) return acc;
  }
  std::vector<size_t> pick(args.size(), 0);
  for (;;) {
    Scalar coeff(1);
    BarWord start;
    for (size_t i = 0; i < args.size(); ++i) {
      const auto& [mono, c] = expansions[i][pick[i]];
      coeff *= c;
      start.slots.push_back(g_sym(mono));
    }
    // initial delta_tilde, one slot at a time
    std::vector<std::string> shape;
    for (int i = 0; i < n; ++i) shape.push_back("L" + std::to_string(i));
    for (size_t i = 0; i < start.length(); ++i) {
      SymExpr d = delta_tilde_u(start.slots[i]);
      if (d.empty()) continue;
      Scalar sign = prefix_sign(start, i);
      std::vector<std::string> nshape = shape;
      nshape[i] = "T(" + shape[i] + ")";
      for (const auto& [dw, dc] : d) {
        BarWord nw = start;
        nw.slots[i] = dw;
        after_op(nw, coeff * sign * dc, nshape, 0, 0);
      }
    }
    size_t i = 0;
    while (i < pick.size() && ++pick[i] == expansions[i].size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
  if (stats) {
    stats->histories = histories;
    stats->distinct_trees = static_cast<long>(shapes.size());
  }
  return acc;
}

StasheffReport check_stasheff(const EwAlgebra& ew, int max_arity,
                              const std::vector<std::vector<Polynomial>>& tuples) {
  StasheffReport rep;
  using EwWord = std::vector<Monomial>;
  using EwBar = std::map<EwWord, Scalar>;

  auto padd = [](EwBar& e, const EwWord& w, const Scalar& c) {
    if (is_zero(c)) return;
    auto [it, ins] = e.emplace(w, c);
    if (!ins) {
      it->second += c;
      if (is_zero(it->second)) e.erase(it);
    }
  };

  // Coderivation assembled from the mu's with the same shifted-parity sign
  // rule as every other bar operator here.
  auto mtilde = [&](const EwBar& e) {
    EwBar out;
    for (const auto& [w, c] : e) {
      int len = static_cast<int>(w.size());
      for (int s = 2; s <= len; ++s) {
        for (int i = 0; i + s <= len; ++i) {
          int par = 0;
          for (int j = 0; j < i; ++j) par ^= (ew_hdeg(w[j]) - 1) & 1;
          // mu_2 is the bare product; its bar component carries the
          // suspension sign of the first consumed slot. The higher mu's
          // already carry theirs internally.
          if (s == 2) par ^= (ew_hdeg(w[i]) - 1) & 1;
          Scalar sign = par ? Scalar(-1) : Scalar(1);
          std::vector<Polynomial> args;
          for (int j = i; j < i + s; ++j) args.push_back(Polynomial::monomial(w[j], Scalar(1)));
          Polynomial val = ew.mu(args);
          for (const auto& [mono, mc] : val.terms()) {
            if (mono.is_constant())
              throw std::logic_error("mu produced a unit term in the reduced bar complex");
            EwWord nw;
            for (int j = 0; j < i; ++j) nw.push_back(w[j]);
            nw.push_back(mono);
            for (int j = i + s; j < len; ++j) nw.push_back(w[j]);
            padd(out, nw, c * sign * mc);
          }
        }
      }
    }
    return out;
  };

  for (const auto& tuple : tuples) {
    if (static_cast<int>(tuple.size()) > max_arity || tuple.size() < 2) continue;
    // expand over monomials
    EwBar word_expr;
    {
      std::vector<std::vector<std::pair<Monomial, Scalar>>> expansions;
      bool dead = false;
      for (const auto& a : tuple) {
        std::vector<std::pair<Monomial, Scalar>> terms;
        for (const auto& [mono, c] : a.terms())
          if (!mono.is_constant()) terms.emplace_back(mono, c);
        if (terms.empty()) dead = true;
        expansions.push_back(std::move(terms));
      }
      if (dead) continue;
      std::vector<size_t> pick(tuple.size(), 0);
      for (;;) {
        EwWord w;
        Scalar c(1);
        for (size_t i = 0; i < tuple.size(); ++i) {
          w.push_back(expansions[i][pick[i]].first);
          c *= expansions[i][pick[i]].second;
        }
        padd(word_expr, w, c);
        size_t i = 0;
        while (i < pick.size() && ++pick[i] == expansions[i].size()) pick[i++] = 0;
        if (i == pick.size()) break;
      }
    }
    EwBar residual = mtilde(mtilde(word_expr));
    ++rep.identities_checked;
    if (!residual.empty()) {
      rep.passed = false;
      std::string desc = "arity " + std::to_string(tuple.size()) + " tuple (";
      for (size_t i = 0; i < tuple.size(); ++i) desc += (i ? ", " : "") + tuple[i].str();
      auto& [w, c] = *residual.begin();
      desc += "): residual term coeff " + to_string(c);
      rep.first_counterexample = desc;
      return rep;
    }
  }
  return rep;
}

std::vector<std::vector<Polynomial>> stasheff_tuple_pool(const EwAlgebra& ew, int arity,
                                                         int random_count, unsigned seed) {
  const Potential& pot = ew.pot();
  std::vector<std::vector<Polynomial>> tuples;
  // exhaustive V-basis tuples
  std::vector<int> idx(arity, 0);
  for (;;) {
    std::vector<Polynomial> tup;
    for (int i : idx) tup.push_back(Polynomial::variable(pot.layout(), Block::E, i));
    tuples.push_back(std::move(tup));
    int i = 0;
    while (i < arity && ++idx[i] == pot.n()) idx[i++] = 0;
    if (i == arity) break;
  }
  // reproducible random mixed monomial tuples
  std::mt19937 rng(seed);
  auto random_mono = [&]() {
    Monomial mono(pot.layout());
    std::uniform_int_distribution<int> coin(0, 1), zdeg(0, 2);
    for (;;) {
      for (int i = 0; i < pot.n(); ++i) mono.set_exp(Block::E, i, coin(rng));
      for (int j = 0; j < pot.m(); ++j) mono.set_exp(Block::Z, j, zdeg(rng));
      if (!mono.is_constant()) return mono;
    }
  };
  for (int t = 0; t < random_count; ++t) {
    std::vector<Polynomial> tup;
    for (int i = 0; i < arity; ++i) tup.push_back(Polynomial::monomial(random_mono(), Scalar(1)));
    tuples.push_back(std::move(tup));
  }
  return tuples;
}

}  // namespace kenv
