#pragma once

#include <string>
#include <vector>

#include "kenv/potential.hpp"

namespace kenv {

// Element of the two-term algebra L = { V in degree 1, U in degree 2 }.
struct LElement {
  QVec v;  // V coordinates, length n
  QVec u;  // U coordinates, length m
  bool is_zero() const;
};

// Element of the resolution: degree 1 carries a polynomial part
// f1 in Sym^{>=1}(V*) (x) U plus a vector part, degree 2 carries
// f2 in Sym(V*) (x) U (the bracket-copy [.]).
struct ResolutionElement {
  Polynomial f1;  // x,z blocks, z-degree exactly 1, x-degree >= 1
  QVec v;         // V coordinates, length n
  Polynomial f2;  // x,z blocks, z-degree exactly 1, x-degree >= 0

  static ResolutionElement zero(const Potential& pot);
  bool is_zero() const;
  bool degree1_only() const { return f2.is_zero(); }
  bool degree2_only() const;
  ResolutionElement operator+(const ResolutionElement& o) const;
  ResolutionElement operator-(const ResolutionElement& o) const;
  bool operator==(const ResolutionElement& o) const = default;
  std::string str() const;
};

// Strips the k (x) U summand: drops monomials of x-degree 0.
Polynomial overline(const Polynomial& p);

// delta(f (+) v) = corrected_derivative_v(W) - [f]; zero on degree 2.
ResolutionElement resolution_differential(const Potential& pot, const ResolutionElement& x);

// {f1 (+) v1, f2 (+) v2} = corr_d_{v1}(f2) + corr_d_{v2}(f1), landing in
// degree 2. Both arguments must be homogeneous of degree 1.
ResolutionElement resolution_bracket(const Potential& pot, const ResolutionElement& a,
                                     const ResolutionElement& b);

// G_1(v) = overline(corr_d_v(W)) (+) v; G_1(u) = u; for k >= 2,
// G_k(v_1..v_k) = k! overline(corr_d_{v_1} ... corr_d_{v_k}(W)) in degree 1.
ResolutionElement g_1(const Potential& pot, const LElement& x);
ResolutionElement g_k(const Potential& pot, const std::vector<int>& vs);

// Contraction data at the complex level: F projects onto L, H is the
// homotopy [g] -> -{overline(g)}.
LElement f_map(const Potential& pot, const ResolutionElement& x);
ResolutionElement h_map(const Potential& pot, const ResolutionElement& x);

struct MorphismCheckResult {
  bool passed = true;
  int checked = 0;
  std::string first_counterexample;
};

// Verifies, for every monomial argument tuple of arity 2..max_arity (indices
// into e_1..e_n), the morphism identity
//   G_1(l_k(v_1..v_k)) = delta(G_k(v_1..v_k))
//                        + sum_i { G_{k-1}(.., v_i-hat, ..), G_1(v_i) }.
MorphismCheckResult check_linfty_morphism(const Potential& pot, int max_arity);

}  // namespace kenv
