#include "kenv/monomial.hpp"

#include <numeric>
#include <stdexcept>

namespace kenv {

int Monomial::offset(Block b) const {
  switch (b) {
    case Block::X: return 0;
    case Block::E: return lay_.n;
    case Block::Z: return 2 * lay_.n;
    case Block::W: return 2 * lay_.n + lay_.m;
  }
  return 0;
}

void Monomial::set_exp(Block b, int i, int e) {
  if (e < 0) throw std::invalid_argument("negative exponent");
  if (i < 0 || i >= block_size(b)) throw std::out_of_range("variable index out of range");
  ex_[offset(b) + i] = e;
}

int Monomial::block_degree(Block b) const {
  int off = offset(b), sz = block_size(b);
  int d = 0;
  for (int i = 0; i < sz; ++i) d += ex_[off + i];
  return d;
}

int Monomial::total_degree() const { return std::accumulate(ex_.begin(), ex_.end(), 0); }

Monomial Monomial::operator*(const Monomial& other) const {
  if (!(lay_ == other.lay_)) throw std::invalid_argument("monomial layout mismatch");
  Monomial r = *this;
  for (size_t i = 0; i < ex_.size(); ++i) r.ex_[i] += other.ex_[i];
  return r;
}

std::strong_ordering Monomial::operator<=>(const Monomial& other) const {
  if (auto c = total_degree() <=> other.total_degree(); c != 0) return c;
  return ex_ <=> other.ex_;
}

std::string var_name(Block b, int i) {
  static const char* prefix[] = {"x", "e", "z", "w"};
  return std::string(prefix[static_cast<int>(b)]) + std::to_string(i + 1);
}

std::string Monomial::str() const {
  std::string out;
  for (Block b : {Block::X, Block::E, Block::Z, Block::W}) {
    int sz = block_size(b);
    for (int i = 0; i < sz; ++i) {
      int e = exp(b, i);
      if (e == 0) continue;
      if (!out.empty()) out += "*";
      out += var_name(b, i);
      if (e > 1) out += "^" + std::to_string(e);
    }
  }
  return out.empty() ? "1" : out;
}

}  // namespace kenv
