#pragma once

#include <string_view>
#include <vector>

#include "kenv/polynomial.hpp"
#include "kenv/rational.hpp"

namespace kenv {

// Parses the polynomial literal syntax used in files and on the CLI:
// integer/rational coefficients, '*', '^', variable names x1..xn, e1..en,
// z1..zm, w1..wm; e.g. "3*x1^2*x2 - 1/2*x3^5". Throws std::invalid_argument
// with a character position on bad input.
Polynomial parse_polynomial(std::string_view text, VarLayout lay);

// Parses the degree literal "[a1,...,ar | t1,...,tk]" (torsion part
// optional). Returns the free and torsion coordinate lists.
void parse_degree_literal(std::string_view text, std::vector<Int>& free_part,
                          std::vector<Int>& torsion_part);

}  // namespace kenv
