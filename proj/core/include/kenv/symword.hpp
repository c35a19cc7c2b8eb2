#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kenv/rational.hpp"

namespace kenv {

// PBW basis factors of U(L_2), in the basis adapted to the splitting
// L_2 = G_1(L) (+) ({S} -> [S]):
//   Ghat(i)        G_1(e_i), odd
//   Brace(a, j)    {x^a z_j} with |a| >= 1, odd copy of S
//   Bracket(a, j)  [x^a z_j] with |a| >= 1, even copy of S
//   UGen(j)        z_j, even
// The enum order doubles as the canonical sort order; all odd factors
// precede all even factors in a normalized word.
enum class FactorKind : uint8_t { Ghat = 0, Brace = 1, Bracket = 2, UGen = 3 };

struct SymFactor {
  FactorKind kind = FactorKind::Ghat;
  int idx = 0;                 // V index for Ghat, U index otherwise
  std::vector<int32_t> xexp;   // Brace/Bracket only

  bool odd() const { return kind == FactorKind::Ghat || kind == FactorKind::Brace; }
  int hdeg() const { return odd() ? 1 : 2; }
  auto operator<=>(const SymFactor&) const = default;

  static SymFactor ghat(int i) { return {FactorKind::Ghat, i, {}}; }
  static SymFactor ugen(int j) { return {FactorKind::UGen, j, {}}; }
  static SymFactor brace(std::vector<int32_t> a, int j) { return {FactorKind::Brace, j, std::move(a)}; }
  static SymFactor bracket(std::vector<int32_t> a, int j) { return {FactorKind::Bracket, j, std::move(a)}; }

  std::string str() const;
};

// Normalized monomial of Sym(L_2) = Lambda(odd) (x) Sym(even): factors
// sorted, odd factors pairwise distinct.
struct SymWord {
  std::vector<SymFactor> fs;

  auto operator<=>(const SymWord&) const = default;
  bool empty() const { return fs.empty(); }  // the unit of U(L_2)
  int hdeg() const;
  int shifted_parity() const { return (hdeg() - 1) & 1; }  // parity in the bar complex
  int koszul_weight() const;   // number of Brace/Bracket factors
  int vcount() const;          // number of Ghat factors
  bool pure_l() const { return koszul_weight() == 0; }
  std::string str() const;
};

// Sorts a factor list into canonical order. Returns the sign of the
// permutation restricted to odd factors, or nullopt when an odd factor
// repeats (the word is zero).
std::optional<std::pair<SymWord, int>> normalize_word(std::vector<SymFactor> fs);

using SymExpr = std::map<SymWord, Scalar>;
void add_term(SymExpr& e, const SymWord& w, const Scalar& c);
SymExpr& operator+=(SymExpr& a, const SymExpr& b);

// Tensor word in the reduced bar construction B U(L_2): every slot is a
// nonempty SymWord.
struct BarWord {
  std::vector<SymWord> slots;
  auto operator<=>(const BarWord&) const = default;
  size_t length() const { return slots.size(); }
  int vcount() const;
  std::string str() const;
};

using BarExpr = std::map<BarWord, Scalar>;
void add_term(BarExpr& e, const BarWord& w, const Scalar& c);
BarExpr& operator+=(BarExpr& a, const BarExpr& b);

struct BarWordHash {
  size_t operator()(const BarWord& w) const;
};

}  // namespace kenv
