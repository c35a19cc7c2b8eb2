#pragma once

#include <map>
#include <string>
#include <vector>

#include "kenv/potential.hpp"

namespace kenv {

// Elements of the Koszul resolution B = Sym(V*) (x) Lambda(U*): polynomials
// in x_i and w_j with square-free w-exponents. Elements of the dual
// coalgebra C = Sym(V) (x) Lambda(U): polynomials in e_i and z_j with
// square-free z-exponents. Plain Polynomial carries both; the helpers below
// validate shape.
bool is_koszul_element(const Polynomial& p);     // x/w blocks, w square-free
bool is_coalgebra_element(const Polynomial& p);  // e/z blocks, z square-free

// delta_B: z_j contracts Lambda(U*) from the left (ordered basis
// w_1 < ... < w_m), W_j multiplies Sym(V*). Lowers exterior degree by one
// and preserves the A-degree.
Polynomial delta_B(const Potential& pot, const Polynomial& b);

// delta_C: W_j acts as a differential operator on Sym(V), z_j multiplies
// Lambda(U) from the left. Raises exterior degree by one.
Polynomial delta_C(const Potential& pot, const Polynomial& c);

// Pairing B x C -> k: <x^a w_S, e^b z_T> = a! [a=b][S=T].
Scalar pairing_bc(const Polynomial& b, const Polynomial& c);

// Basis of C_W = Ker(delta_C) restricted to the Sym(V) part, in one
// A-degree; exact kernel computation. Vectors are returned RREF-normalized
// over the deg-lex monomial basis, so the output is canonical.
std::vector<Polynomial> cw_basis(const Potential& pot, const Degree& degree);

// Monomial basis of the graded piece Sym(V*)_alpha / (W_1,..,W_m)_alpha:
// representatives are the non-pivot monomials once the ideal component is
// put in row echelon form.
std::vector<Polynomial> sw_basis(const Potential& pot, const Degree& degree);
int sw_dim(const Potential& pot, const Degree& degree);

enum class RegularityVerdict { VanishesHere, NonvanishingHomology, NotApplicable };

struct RegularityReport {
  // verdict per (A-degree, exterior degree); exterior degree >= 1 required.
  std::map<Bidegree, RegularityVerdict> cells;
  bool any_nonvanishing = false;
  std::string summary() const;
};

// Koszul homology H(B, delta_B) in a finite bidegree window. A nonzero
// homology class in positive exterior degree certifies that the sequence is
// not regular; an all-vanishing window is only "consistent with regular".
RegularityReport check_regular_sequence(const Potential& pot, const std::vector<Degree>& degrees,
                                        int ext_min, int ext_max);

}  // namespace kenv
