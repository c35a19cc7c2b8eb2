#pragma once

#include <gmpxx.h>
#include <string>
#include <string_view>

namespace kenv {

// All coefficient arithmetic in the library is exact. Scalar is an
// arbitrary-precision rational kept in canonical form (reduced fraction,
// positive denominator) by GMP.
using Scalar = mpq_class;
using Int = mpz_class;

inline Scalar scalar(long num, long den = 1) { return Scalar(num, den); }

inline bool is_zero(const Scalar& s) { return sgn(s) == 0; }

// Parses an integer or a/b rational. Rejects anything that looks like a
// floating-point literal (decimal point, exponent): those are a hard error
// everywhere in this library.
Scalar parse_scalar(std::string_view text);

Int parse_int(std::string_view text);

std::string to_string(const Scalar& s);
std::string to_string(const Int& z);

}  // namespace kenv
