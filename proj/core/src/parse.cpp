#include "kenv/parse.hpp"

#include <cctype>
#include <stdexcept>
#include <string>

namespace kenv {

namespace {

struct Cursor {
  std::string_view text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  char take() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    return text[pos++];
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("parse error at position " + std::to_string(pos) + ": " + msg +
                                " in '" + std::string(text) + "'");
  }
};

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string read_digits(Cursor& cur) {
  cur.skip_ws();
  std::string out;
  while (cur.pos < cur.text.size() && is_digit(cur.text[cur.pos])) out += cur.text[cur.pos++];
  if (out.empty()) cur.fail("expected digits");
  return out;
}

Scalar read_rational(Cursor& cur) {
  std::string num = read_digits(cur);
  if (cur.pos < cur.text.size() && cur.text[cur.pos] == '.') cur.fail("floating-point literal not allowed");
  if (cur.peek() == '/') {
    cur.take();
    std::string den = read_digits(cur);
    return parse_scalar(num + "/" + den);
  }
  return parse_scalar(num);
}

int read_exponent(Cursor& cur) {
  std::string d = read_digits(cur);
  long e = std::stol(d);
  if (e < 0 || e > 1'000'000) cur.fail("exponent out of range");
  return static_cast<int>(e);
}

// One product of factors, e.g. "3*x1^2*x2" or "x1" or "5".
Polynomial read_term(Cursor& cur, VarLayout lay) {
  Scalar coeff(1);
  Monomial mono(lay);
  bool saw_factor = false;
  for (;;) {
    char c = cur.peek();
    if (is_digit(c)) {
      coeff *= read_rational(cur);
      saw_factor = true;
    } else if (c == 'x' || c == 'e' || c == 'z' || c == 'w') {
      size_t at = cur.pos;
      char prefix = cur.take();
      Block b = prefix == 'x'   ? Block::X
                : prefix == 'e' ? Block::E
                : prefix == 'z' ? Block::Z
                                : Block::W;
      std::string d = read_digits(cur);
      int idx = std::stoi(d) - 1;
      if (idx < 0 || idx >= mono.block_size(b)) {
        cur.pos = at;
        cur.fail("variable " + std::string(1, prefix) + d + " out of range for this context");
      }
      int e = 1;
      if (cur.peek() == '^') {
        cur.take();
        e = read_exponent(cur);
      }
      mono.set_exp(b, idx, mono.exp(b, idx) + e);
      saw_factor = true;
    } else {
      cur.fail("expected a coefficient or a variable");
    }
    if (cur.peek() == '*') {
      cur.take();
      continue;
    }
    break;
  }
  if (!saw_factor) cur.fail("empty term");
  return Polynomial::monomial(mono, coeff);
}

}  // namespace

Polynomial parse_polynomial(std::string_view text, VarLayout lay) {
  Cursor cur{text};
  Polynomial result(lay);
  bool negate = false;
  if (cur.peek() == '-') {
    cur.take();
    negate = true;
  } else if (cur.peek() == '+') {
    cur.take();
  }
  for (;;) {
    Polynomial term = read_term(cur, lay);
    result += negate ? -term : term;
    if (cur.done()) break;
    char c = cur.take();
    if (c == '+') {
      negate = false;
    } else if (c == '-') {
      negate = true;
    } else {
      --cur.pos;
      cur.fail("expected '+' or '-'");
    }
  }
  return result;
}

void parse_degree_literal(std::string_view text, std::vector<Int>& free_part,
                          std::vector<Int>& torsion_part) {
  free_part.clear();
  torsion_part.clear();
  Cursor cur{text};
  if (cur.take() != '[') cur.fail("degree literal must start with '['");
  auto read_list = [&](std::vector<Int>& out, char stop1, char stop2) {
    if (cur.peek() == stop1 || cur.peek() == stop2) return;
    for (;;) {
      std::string tok;
      if (cur.peek() == '-' || cur.peek() == '+') tok += cur.take();
      tok += read_digits(cur);
      out.push_back(parse_int(tok));
      if (cur.peek() == ',') {
        cur.take();
        continue;
      }
      break;
    }
  };
  read_list(free_part, '|', ']');
  char c = cur.take();
  if (c == '|') {
    read_list(torsion_part, ']', ']');
    c = cur.take();
  }
  if (c != ']') cur.fail("degree literal must end with ']'");
  if (!cur.done()) cur.fail("trailing characters after degree literal");
}

}  // namespace kenv
