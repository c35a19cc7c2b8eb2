#include "kenv/linfty.hpp"

#include <functional>
#include <stdexcept>

namespace kenv {

namespace {

void check_s_shape(const Polynomial& p, bool allow_constant_u) {
  for (const auto& [mono, c] : p.terms()) {
    if (mono.uses_block(Block::E) || mono.uses_block(Block::W))
      throw std::invalid_argument("resolution element parts live in Sym(V*) (x) U");
    if (mono.block_degree(Block::Z) != 1)
      throw std::invalid_argument("resolution element parts must be linear in U");
    if (!allow_constant_u && mono.block_degree(Block::X) == 0)
      throw std::invalid_argument("degree-1 polynomial part has no constant-U term");
  }
}

bool qvec_zero(const QVec& v) {
  for (const auto& c : v)
    if (!is_zero(c)) return false;
  return true;
}

}  // namespace

bool LElement::is_zero() const { return qvec_zero(v) && qvec_zero(u); }

ResolutionElement ResolutionElement::zero(const Potential& pot) {
  ResolutionElement r;
  r.f1 = Polynomial(pot.layout());
  r.f2 = Polynomial(pot.layout());
  r.v.assign(pot.n(), Scalar(0));
  return r;
}

bool ResolutionElement::is_zero() const { return f1.is_zero() && f2.is_zero() && qvec_zero(v); }

bool ResolutionElement::degree2_only() const { return f1.is_zero() && qvec_zero(v); }

ResolutionElement ResolutionElement::operator+(const ResolutionElement& o) const {
  ResolutionElement r = *this;
  r.f1 += o.f1;
  r.f2 += o.f2;
  for (size_t i = 0; i < r.v.size(); ++i) r.v[i] += o.v[i];
  return r;
}

ResolutionElement ResolutionElement::operator-(const ResolutionElement& o) const {
  ResolutionElement r = *this;
  r.f1 -= o.f1;
  r.f2 -= o.f2;
  for (size_t i = 0; i < r.v.size(); ++i) r.v[i] -= o.v[i];
  return r;
}

std::string ResolutionElement::str() const {
  std::string out = "({" + f1.str() + "} (+) ";
  std::string vs;
  for (size_t i = 0; i < v.size(); ++i) {
    if (kenv::is_zero(v[i])) continue;
    if (!vs.empty()) vs += " + ";
    vs += to_string(v[i]) + "*e" + std::to_string(i + 1);
  }
  out += (vs.empty() ? "0" : vs) + ") + [" + f2.str() + "]";
  return out;
}

Polynomial overline(const Polynomial& p) {
  return p.filter([](const Monomial& mo) { return mo.block_degree(Block::X) >= 1; });
}

namespace {

Polynomial corrected_along(const Potential& pot, const QVec& v, const Polynomial& g) {
  Polynomial out(pot.layout());
  for (int i = 0; i < pot.n(); ++i) {
    if (kenv::is_zero(v[i])) continue;
    out += corrected_derivative(i, g) * v[i];
  }
  return out;
}

}  // namespace

ResolutionElement resolution_differential(const Potential& pot, const ResolutionElement& x) {
  check_s_shape(x.f1, false);
  check_s_shape(x.f2, true);
  ResolutionElement out = ResolutionElement::zero(pot);
  out.f2 = corrected_along(pot, x.v, pot.total()) - x.f1;
  return out;
}

ResolutionElement resolution_bracket(const Potential& pot, const ResolutionElement& a,
                                     const ResolutionElement& b) {
  if (!a.degree1_only() || !b.degree1_only())
    throw std::invalid_argument("resolution_bracket expects degree-1 elements");
  ResolutionElement out = ResolutionElement::zero(pot);
  out.f2 = corrected_along(pot, a.v, b.f1) + corrected_along(pot, b.v, a.f1);
  return out;
}

ResolutionElement g_1(const Potential& pot, const LElement& x) {
  ResolutionElement out = ResolutionElement::zero(pot);
  out.v = x.v;
  out.f1 = overline(corrected_along(pot, x.v, pot.total()));
  for (int j = 0; j < pot.m(); ++j) {
    if (!is_zero(x.u[j])) out.f2 += Polynomial::variable(pot.layout(), Block::Z, j) * x.u[j];
  }
  return out;
}

ResolutionElement g_k(const Potential& pot, const std::vector<int>& vs) {
  if (vs.size() < 2) throw std::invalid_argument("g_k needs arity >= 2; use g_1 for arity 1");
  Polynomial acc = pot.total();
  Scalar factorial(1);
  for (size_t t = 0; t < vs.size(); ++t) {
    acc = corrected_derivative(vs[t], acc);
    factorial *= Scalar(static_cast<long>(t + 1));
  }
  ResolutionElement out = ResolutionElement::zero(pot);
  out.f1 = overline(acc) * factorial;
  return out;
}

LElement f_map(const Potential& pot, const ResolutionElement& x) {
  LElement out;
  out.v = x.v;
  out.u.assign(pot.m(), Scalar(0));
  for (const auto& [mono, c] : x.f2.terms()) {
    if (mono.block_degree(Block::X) != 0) continue;
    for (int j = 0; j < pot.m(); ++j)
      if (mono.exp(Block::Z, j) == 1) out.u[j] += c;
  }
  return out;
}

ResolutionElement h_map(const Potential& pot, const ResolutionElement& x) {
  ResolutionElement out = ResolutionElement::zero(pot);
  out.f1 = -overline(x.f2);
  return out;
}

MorphismCheckResult check_linfty_morphism(const Potential& pot, int max_arity) {
  MorphismCheckResult res;
  int n = pot.n();
  auto g1_of_basis = [&](int i) {
    LElement le;
    le.v.assign(n, Scalar(0));
    le.u.assign(pot.m(), Scalar(0));
    le.v[i] = 1;
    return g_1(pot, le);
  };
  auto g1_of_u = [&](const QVec& u) {
    LElement le;
    le.v.assign(n, Scalar(0));
    le.u = u;
    return g_1(pot, le);
  };

  // all nondecreasing index tuples of each arity (l_k and G_k are symmetric)
  for (int k = 2; k <= max_arity; ++k) {
    std::vector<int> tuple(k, 0);
    std::function<void(int, int)> sweep = [&](int at, int from) {
      if (!res.passed) return;
      if (at == k) {
        QVec lk = pot.l_k(tuple);
        ResolutionElement lhs = g1_of_u(lk);
        ResolutionElement rhs = resolution_differential(pot, g_k(pot, tuple));
        if (k == 2) {
          // the two (1,1)-unshuffles coincide: a single bracket term
          rhs = rhs + resolution_bracket(pot, g1_of_basis(tuple[0]), g1_of_basis(tuple[1]));
        } else {
          for (int i = 0; i < k; ++i) {
            std::vector<int> rest;
            for (int t = 0; t < k; ++t)
              if (t != i) rest.push_back(tuple[t]);
            ResolutionElement left = rest.size() == 1 ? g1_of_basis(rest[0]) : g_k(pot, rest);
            rhs = rhs + resolution_bracket(pot, left, g1_of_basis(tuple[i]));
          }
        }
        ++res.checked;
        if (!(lhs == rhs)) {
          res.passed = false;
          std::string tup;
          for (int t : tuple) tup += " e" + std::to_string(t + 1);
          res.first_counterexample = "arity " + std::to_string(k) + " on (" + tup +
                                     " ): lhs = " + lhs.str() + ", rhs = " + rhs.str();
        }
        return;
      }
      for (int i = from; i < n; ++i) {
        tuple[at] = i;
        sweep(at + 1, i);
      }
    };
    sweep(0, 0);
  }
  return res;
}

}  // namespace kenv
