#include "kenv/polynomial.hpp"

#include <stdexcept>

namespace kenv {

Polynomial Polynomial::constant(VarLayout lay, const Scalar& c) {
  Polynomial p(lay);
  p.add_term(Monomial(lay), c);
  return p;
}

Polynomial Polynomial::variable(VarLayout lay, Block b, int idx, int power) {
  Monomial mono(lay);
  mono.set_exp(b, idx, power);
  return monomial(mono, Scalar(1));
}

Polynomial Polynomial::monomial(const Monomial& mono, const Scalar& c) {
  Polynomial p(mono.layout());
  p.add_term(mono, c);
  return p;
}

void Polynomial::add_term(const Monomial& mono, const Scalar& c) {
  if (kenv::is_zero(c)) return;
  if (terms_.empty() && lay_ == VarLayout{}) lay_ = mono.layout();
  if (!(mono.layout() == lay_)) throw std::invalid_argument("monomial layout mismatch");
  auto [it, inserted] = terms_.emplace(mono, c);
  if (!inserted) {
    it->second += c;
    if (kenv::is_zero(it->second)) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [mono, c] : other.terms_) add_term(mono, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  for (const auto& [mono, c] : other.terms_) add_term(mono, -c);
  return *this;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  Polynomial r = *this;
  r += other;
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  Polynomial r = *this;
  r -= other;
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r(lay_);
  for (const auto& [mono, c] : terms_) r.terms_.emplace(mono, -c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  Polynomial r(lay_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : other.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

Polynomial Polynomial::operator*(const Scalar& c) const {
  Polynomial r(lay_);
  if (kenv::is_zero(c)) return r;
  for (const auto& [mono, co] : terms_) r.terms_.emplace(mono, co * c);
  return r;
}

Scalar Polynomial::coeff(const Monomial& mono) const {
  auto it = terms_.find(mono);
  return it == terms_.end() ? Scalar(0) : it->second;
}

Scalar Polynomial::constant_term() const {
  if (terms_.empty()) return Scalar(0);
  return coeff(Monomial(lay_));
}

bool Polynomial::uses_block(Block b) const {
  for (const auto& [mono, c] : terms_)
    if (mono.uses_block(b)) return true;
  return false;
}

int Polynomial::max_block_degree(Block b) const {
  int d = 0;
  for (const auto& [mono, c] : terms_) d = std::max(d, mono.block_degree(b));
  return d;
}

int Polynomial::min_block_degree(Block b) const {
  if (terms_.empty()) return 0;
  int d = -1;
  for (const auto& [mono, c] : terms_) {
    int bd = mono.block_degree(b);
    d = (d < 0) ? bd : std::min(d, bd);
  }
  return d;
}

Polynomial Polynomial::filter(const std::function<bool(const Monomial&)>& keep) const {
  Polynomial r(lay_);
  for (const auto& [mono, c] : terms_)
    if (keep(mono)) r.terms_.emplace(mono, c);
  return r;
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  // Highest terms first reads better for humans and stays deterministic.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [mono, c] = *it;
    Scalar abs_c = sgn(c) < 0 ? Scalar(-c) : c;
    if (out.empty()) {
      if (sgn(c) < 0) out += "-";
    } else {
      out += sgn(c) < 0 ? " - " : " + ";
    }
    bool unit_coeff = (abs_c == 1);
    if (!unit_coeff || mono.is_constant()) out += to_string(abs_c);
    if (!mono.is_constant()) {
      if (!unit_coeff) out += "*";
      out += mono.str();
    }
  }
  return out;
}

namespace {

// Falling factorial b(b-1)...(b-a+1): the coefficient from applying d/dv a
// times to v^b.
Scalar falling(int b, int a) {
  Scalar r(1);
  for (int t = 0; t < a; ++t) r *= Scalar(b - t);
  return r;
}

// Per-monomial derivative: mf differentiates mg through dual variables.
// Returns false when the derivative vanishes.
bool diff_mono(const Monomial& mf, const Monomial& mg, Monomial& out, Scalar& coeff) {
  out = mg;
  coeff = 1;
  for (Block bf : {Block::X, Block::E, Block::Z, Block::W}) {
    Block bg = dual_block(bf);
    int sz = mf.block_size(bf);
    for (int i = 0; i < sz; ++i) {
      int a = mf.exp(bf, i);
      if (a == 0) continue;
      int b = mg.exp(bg, i);
      if (b < a) return false;
      coeff *= falling(b, a);
      out.set_exp(bg, i, b - a);
    }
  }
  return true;
}

}  // namespace

Polynomial diff_apply(const Polynomial& f, const Polynomial& g) {
  if (!(f.layout() == g.layout())) throw std::invalid_argument("layout mismatch in diff_apply");
  for (Block b : {Block::X, Block::E, Block::Z, Block::W}) {
    if (f.uses_block(b) && g.uses_block(b)) {
      throw std::invalid_argument("variable-set mismatch: operator and operand share block '" +
                                  var_name(b, 0).substr(0, 1) + "'");
    }
  }
  Polynomial r(f.layout());
  for (const auto& [mf, cf] : f.terms()) {
    for (const auto& [mg, cg] : g.terms()) {
      Monomial mono;
      Scalar c;
      if (diff_mono(mf, mg, mono, c)) r.add_term(mono, cf * cg * c);
    }
  }
  return r;
}

Scalar pairing(const Polynomial& f, const Polynomial& g) {
  return diff_apply(f, g).constant_term();
}

Polynomial corrected_derivative(int v, const Polynomial& g) {
  Polynomial r(g.layout());
  if (g.uses_block(Block::E) || g.uses_block(Block::W)) {
    throw std::invalid_argument("corrected_derivative expects a polynomial over V* (and U)");
  }
  for (const auto& [mono, c] : g.terms()) {
    int k = mono.block_degree(Block::X);
    if (k == 0) continue;  // kills constants of Sym(V*), including k (x) U
    int a = mono.exp(Block::X, v);
    if (a == 0) continue;
    Monomial out = mono;
    out.set_exp(Block::X, v, a - 1);
    r.add_term(out, c * Scalar(a) / Scalar(k));
  }
  return r;
}

Scalar pairing_monomial_oracle(const Monomial& f, const Monomial& g) {
  Scalar r(1);
  for (Block bf : {Block::X, Block::E, Block::Z, Block::W}) {
    Block bg = dual_block(bf);
    int sz = f.block_size(bf);
    for (int i = 0; i < sz; ++i) {
      int a = f.exp(bf, i), b = g.exp(bg, i);
      if (a != b) return Scalar(0);
      for (int t = 2; t <= a; ++t) r *= t;
    }
    // both monomials must be pure in dual blocks for the oracle to apply
    for (int i = 0; i < sz; ++i) {
      if (g.exp(bf, i) != 0 && f.exp(bf, i) != 0) throw std::invalid_argument("oracle: shared block");
    }
  }
  return r;
}

}  // namespace kenv
