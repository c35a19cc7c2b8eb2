#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kenv/abelian.hpp"
#include "kenv/linalg.hpp"

namespace kenv {

enum class SemigroupVerdict { ProvedIn, ProvedOut, UnknownWithinBound };

std::string to_string(SemigroupVerdict v);

struct SemigroupCheck {
  SemigroupVerdict verdict = SemigroupVerdict::UnknownWithinBound;
  std::vector<int> witness;  // generator multiplicities c_i when ProvedIn
};

// Rational functional phi with phi(free part of alpha_i) >= 1 for every
// generator degree; exists iff the grading cone is pointed (no nonnegative
// combination of the alpha_i vanishes), which is what makes all graded
// components finite dimensional. nullopt when no such functional exists.
std::optional<QVec> pointedness_functional(const std::vector<Degree>& alphas);

// Membership of a bidegree in gamma + A_script, where A_script is the
// subsemigroup of A x ZZ generated by (-alpha_i, 1), (-alpha_i, 0) and 0.
// The search enumerates generator sums with at most `bound` terms; the
// pointedness functional supplies a completeness budget, so a negative
// answer within that budget is ProvedOut rather than unknown.
SemigroupCheck semigroup_window_check(const Bidegree& bidegree, const std::vector<Degree>& alphas,
                                      const Bidegree& gamma, int bound);

}  // namespace kenv
