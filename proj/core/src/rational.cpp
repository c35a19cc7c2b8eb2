#include "kenv/rational.hpp"

#include <stdexcept>

namespace kenv {

namespace {

void reject_float(std::string_view text) {
  for (char c : text) {
    if (c == '.' || c == 'e' || c == 'E') {
      throw std::invalid_argument("floating-point literal not allowed in exact input: '" +
                                  std::string(text) + "'");
    }
  }
}

}  // namespace

Scalar parse_scalar(std::string_view text) {
  reject_float(text);
  if (text.empty()) throw std::invalid_argument("empty numeric literal");
  Scalar q;
  if (q.set_str(std::string(text), 10) != 0) {
    throw std::invalid_argument("bad rational literal: '" + std::string(text) + "'");
  }
  if (sgn(q.get_den()) == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

Int parse_int(std::string_view text) {
  reject_float(text);
  Int z;
  if (z.set_str(std::string(text), 10) != 0) {
    throw std::invalid_argument("bad integer literal: '" + std::string(text) + "'");
  }
  return z;
}

std::string to_string(const Scalar& s) { return s.get_str(); }
std::string to_string(const Int& z) { return z.get_str(); }

}  // namespace kenv
