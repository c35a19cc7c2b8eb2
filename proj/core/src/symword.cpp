#include "kenv/symword.hpp"

#include <algorithm>

namespace kenv {

std::string SymFactor::str() const {
  auto xs = [&]() {
    std::string s;
    for (size_t i = 0; i < xexp.size(); ++i) {
      if (xexp[i] == 0) continue;
      if (!s.empty()) s += "*";
      s += "x" + std::to_string(i + 1);
      if (xexp[i] > 1) s += "^" + std::to_string(xexp[i]);
    }
    return s + "*z" + std::to_string(idx + 1);
  };
  switch (kind) {
    case FactorKind::Ghat: return "g" + std::to_string(idx + 1);
    case FactorKind::UGen: return "u" + std::to_string(idx + 1);
    case FactorKind::Brace: return "{" + xs() + "}";
    case FactorKind::Bracket: return "[" + xs() + "]";
  }
  return "?";
}

int SymWord::hdeg() const {
  int d = 0;
  for (const auto& f : fs) d += f.hdeg();
  return d;
}

int SymWord::koszul_weight() const {
  int k = 0;
  for (const auto& f : fs)
    if (f.kind == FactorKind::Brace || f.kind == FactorKind::Bracket) ++k;
  return k;
}

int SymWord::vcount() const {
  int k = 0;
  for (const auto& f : fs)
    if (f.kind == FactorKind::Ghat) ++k;
  return k;
}

std::string SymWord::str() const {
  if (fs.empty()) return "1";
  std::string s;
  for (const auto& f : fs) {
    if (!s.empty()) s += ".";
    s += f.str();
  }
  return s;
}

std::optional<std::pair<SymWord, int>> normalize_word(std::vector<SymFactor> fs) {
  // Parity of the permutation restricted to the odd subsequence.
  std::vector<const SymFactor*> odds;
  for (const auto& f : fs)
    if (f.odd()) odds.push_back(&f);
  int inversions = 0;
  for (size_t i = 0; i < odds.size(); ++i)
    for (size_t j = i + 1; j < odds.size(); ++j) {
      if (*odds[j] < *odds[i]) ++inversions;
      else if (*odds[i] == *odds[j]) return std::nullopt;  // odd square
    }
  std::sort(fs.begin(), fs.end());
  return std::make_pair(SymWord{std::move(fs)}, (inversions % 2 == 0) ? 1 : -1);
}

void add_term(SymExpr& e, const SymWord& w, const Scalar& c) {
  if (is_zero(c)) return;
  auto [it, inserted] = e.emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (is_zero(it->second)) e.erase(it);
  }
}

SymExpr& operator+=(SymExpr& a, const SymExpr& b) {
  for (const auto& [w, c] : b) add_term(a, w, c);
  return a;
}

int BarWord::vcount() const {
  int k = 0;
  for (const auto& s : slots) k += s.vcount();
  return k;
}

std::string BarWord::str() const {
  std::string s;
  for (const auto& w : slots) {
    if (!s.empty()) s += " | ";
    s += w.str();
  }
  return "(" + s + ")";
}

void add_term(BarExpr& e, const BarWord& w, const Scalar& c) {
  if (is_zero(c)) return;
  auto [it, inserted] = e.emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (is_zero(it->second)) e.erase(it);
  }
}

BarExpr& operator+=(BarExpr& a, const BarExpr& b) {
  for (const auto& [w, c] : b) add_term(a, w, c);
  return a;
}

size_t BarWordHash::operator()(const BarWord& w) const {
  size_t h = 1469598103934665603ull;
  auto mix = [&h](size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (const auto& slot : w.slots) {
    mix(0xabcd);
    for (const auto& f : slot.fs) {
      mix(static_cast<size_t>(f.kind));
      mix(static_cast<size_t>(f.idx));
      for (auto e : f.xexp) mix(static_cast<size_t>(e));
      mix(0x77);
    }
  }
  return h;
}

}  // namespace kenv
