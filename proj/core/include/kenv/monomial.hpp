#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace kenv {

// The four variable blocks. x_i span V*, e_i span V (dual to x_i),
// z_j span U, w_j span U* (dual to z_j).
enum class Block : int { X = 0, E = 1, Z = 2, W = 3 };

constexpr Block dual_block(Block b) {
  switch (b) {
    case Block::X: return Block::E;
    case Block::E: return Block::X;
    case Block::Z: return Block::W;
    case Block::W: return Block::Z;
  }
  return Block::X;
}

struct VarLayout {
  int n = 0;  // dim V
  int m = 0;  // dim U
  bool operator==(const VarLayout&) const = default;
};

// Sparse-friendly dense exponent vector over all four blocks, layout
// [x_1..x_n | e_1..e_n | z_1..z_m | w_1..w_m]. Exponents are nonnegative.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(VarLayout lay) : lay_(lay), ex_(2 * lay.n + 2 * lay.m, 0) {}

  const VarLayout& layout() const { return lay_; }

  int block_size(Block b) const { return (b == Block::X || b == Block::E) ? lay_.n : lay_.m; }
  int offset(Block b) const;

  int exp(Block b, int i) const { return ex_[offset(b) + i]; }
  void set_exp(Block b, int i, int e);

  int block_degree(Block b) const;
  int total_degree() const;
  bool is_constant() const { return total_degree() == 0; }
  bool uses_block(Block b) const { return block_degree(b) > 0; }

  Monomial operator*(const Monomial& other) const;

  // Degree-lexicographic order with the fixed variable order x < e < z < w,
  // indices ascending. This is the canonical serialization order.
  std::strong_ordering operator<=>(const Monomial& other) const;
  bool operator==(const Monomial& other) const = default;

  std::string str() const;  // e.g. "x1^2*z1"; "1" for the constant monomial

  const std::vector<int32_t>& raw() const { return ex_; }

 private:
  VarLayout lay_;
  std::vector<int32_t> ex_;
};

std::string var_name(Block b, int i);  // 0-based index -> "x1", "e2", ...

}  // namespace kenv
