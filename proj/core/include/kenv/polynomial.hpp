#pragma once

#include <functional>
#include <map>
#include <string>

#include "kenv/monomial.hpp"
#include "kenv/rational.hpp"

namespace kenv {

// Sparse exact-rational multivariate polynomial over the four variable
// blocks. Zero coefficients are never stored; the term order is the
// canonical deg-lex order of Monomial, so iteration and printing are
// deterministic.
class Polynomial {
 public:
  using Terms = std::map<Monomial, Scalar>;

  Polynomial() = default;
  explicit Polynomial(VarLayout lay) : lay_(lay) {}

  static Polynomial constant(VarLayout lay, const Scalar& c);
  static Polynomial variable(VarLayout lay, Block b, int idx, int power = 1);
  static Polynomial monomial(const Monomial& mono, const Scalar& c);

  const VarLayout& layout() const { return lay_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  void add_term(const Monomial& mono, const Scalar& c);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator*(const Scalar& c) const;
  bool operator==(const Polynomial& other) const = default;

  Scalar coeff(const Monomial& mono) const;
  Scalar constant_term() const;

  // True if some monomial has a nonzero exponent in block b.
  bool uses_block(Block b) const;

  // Max/min over monomials of the block degree (0 for the zero polynomial).
  int max_block_degree(Block b) const;
  int min_block_degree(Block b) const;

  // Keeps only terms satisfying the predicate.
  Polynomial filter(const std::function<bool(const Monomial&)>& keep) const;

  std::string str() const;  // "3*x1^2*x2 - 1/2*x3^5", "0" for zero

 private:
  VarLayout lay_;
  Terms terms_;
};

inline Polynomial operator*(const Scalar& c, const Polynomial& p) { return p * c; }

// Differential-operator action of f on g: each variable of f differentiates
// the dual variable in g. f and g must not use a common block.
Polynomial diff_apply(const Polynomial& f, const Polynomial& g);

// <f, g> = diff_apply(f, g) evaluated at 0.
Scalar pairing(const Polynomial& f, const Polynomial& g);

// Corrected partial derivative along e_v: sends a monomial of Sym^k(V*)
// (tensored with anything in the z-block) to (1/k) times its x-derivative,
// and kills Sym^0.
Polynomial corrected_derivative(int v, const Polynomial& g);

// Combinatorial pairing oracle: <e^I, x^J> = I! when I = J, else 0.
// Independent of diff_apply; used to cross-check it.
Scalar pairing_monomial_oracle(const Monomial& f, const Monomial& g);

}  // namespace kenv
