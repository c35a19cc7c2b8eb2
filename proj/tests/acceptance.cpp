// Acceptance suite: one line per criterion, [PASS]/[FAIL], nonzero exit on
// any failure. Everything is exact rational arithmetic; "tolerance" is
// identically zero throughout.

#include <cstdlib>
#include <iostream>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kenv/ainfty.hpp"
#include "kenv/bgg.hpp"
#include "kenv/io.hpp"
#include "kenv/parse.hpp"
#include "kenv/koszul.hpp"
#include "kenv/linfty.hpp"
#include "kenv/toric.hpp"

using namespace kenv;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << what;
  if (!detail.empty()) std::cout << " — " << detail;
  std::cout << std::endl;
  if (!ok) ++g_failures;
}

struct Corpus {
  std::string name;
  std::shared_ptr<Potential> pot;
};

std::shared_ptr<Potential> make_pot(int n, int m, const std::vector<std::string>& ws) {
  VarLayout lay{n, m};
  std::vector<Polynomial> polys;
  for (const auto& w : ws) polys.push_back(parse_polynomial(w, lay));
  return std::make_shared<Potential>(n, m, polys);
}

std::vector<Corpus> corpus() {
  return {
      {"x^2 z", make_pot(1, 1, {"x1^2"})},
      {"x^3 z", make_pot(1, 1, {"x1^3"})},
      {"x^4 z", make_pot(1, 1, {"x1^4"})},
      {"x^5 z", make_pot(1, 1, {"x1^5"})},
      {"(x^2+y^2) z", make_pot(2, 1, {"x1^2 + x2^2"})},
      {"x^2 y z", make_pot(2, 1, {"x1^2*x2"})},
      {"x^3 z1 + y^3 z2", make_pot(2, 2, {"x1^3", "x2^3"})},
      {"xyz z1", make_pot(3, 1, {"x1*x2*x3"})},
      {"(x^3+xy^2) z1 + x^2y^2 z2", make_pot(2, 2, {"x1^3 + x1*x2^2", "x1^2*x2^2"})},
  };
}

std::vector<Polynomial> random_mixed_tuple(const Potential& pot, int arity, std::mt19937& rng) {
  std::uniform_int_distribution<int> coin(0, 1), zd(0, 1);
  std::vector<Polynomial> args;
  for (int i = 0; i < arity; ++i) {
    Monomial mono(pot.layout());
    for (int v = 0; v < pot.n(); ++v) mono.set_exp(Block::E, v, coin(rng));
    for (int j = 0; j < pot.m(); ++j) mono.set_exp(Block::Z, j, zd(rng));
    if (mono.is_constant()) mono.set_exp(Block::E, 0, 1);
    args.push_back(Polynomial::monomial(mono, Scalar(1)));
  }
  return args;
}

ModulePresentation trivial_module(const Potential& pot) {
  ModulePresentation pres;
  pres.generators.push_back({"g", pot.group()->zero(), 0});
  for (int i = 0; i < pot.n(); ++i)
    pres.relations.push_back({Polynomial::variable(pot.layout(), Block::X, i)});
  return pres;
}

// ---------------------------------------------------------------------------

void criterion1_stasheff() {
  bool ok = true;
  std::string detail;
  long total = 0;
  for (const auto& c : corpus()) {
    EwAlgebra ew(c.pot);
    std::mt19937 rng(9001);
    for (int arity = 3; arity <= 5; ++arity) {
      auto tuples = stasheff_tuple_pool(ew, arity, 0, 1);  // exhaustive V tuples
      int randoms = arity == 3 ? 34 : 33;                  // 100 random mixed tuples total
      for (int t = 0; t < randoms; ++t) tuples.push_back(random_mixed_tuple(*c.pot, arity, rng));
      auto rep = check_stasheff(ew, arity, tuples);
      total += rep.identities_checked;
      if (!rep.passed) {
        ok = false;
        detail = c.name + ": " + rep.first_counterexample;
        break;
      }
    }
    if (!ok) break;
  }
  report(1, "Stasheff identities to arity 5, exact zero residuals", ok,
         ok ? std::to_string(total) + " tuples across " + std::to_string(corpus().size()) +
                  " potentials"
            : detail);
}

void criterion2_prop4() {
  bool ok = true;
  std::string detail;
  std::mt19937 rng(424242);
  for (const auto& c : corpus()) {
    EwAlgebra ew(c.pot);
    const Potential& pot = *c.pot;
    int n = pot.n();
    // mu_n = (1/n!) l_n on exhaustive V tuples; arity 2 through the graded
    // symmetrization (the Clifford relation)
    for (int arity = 2; arity <= 5 && ok; ++arity) {
      std::vector<int> idx(arity, 0);
      for (;;) {
        std::vector<Polynomial> args;
        for (int v : idx) args.push_back(Polynomial::variable(pot.layout(), Block::E, v));
        QVec ln = pot.l_k(idx);
        Polynomial lpoly(pot.layout());
        for (int j = 0; j < pot.m(); ++j)
          if (!is_zero(ln[j])) lpoly += Polynomial::variable(pot.layout(), Block::Z, j) * ln[j];
        if (arity == 2) {
          std::vector<Polynomial> rev{args[1], args[0]};
          if (!(ew.mu(args) + ew.mu(rev) == lpoly)) {
            ok = false;
            detail = c.name + ": Clifford relation fails";
            break;
          }
        } else {
          Scalar fact(1);
          for (int t = 2; t <= arity; ++t) fact *= t;
          if (!(ew.mu(args) * fact == lpoly)) {
            ok = false;
            detail = c.name + ": mu_" + std::to_string(arity) + " != l/" + to_string(fact);
            break;
          }
        }
        int i = 0;
        while (i < arity && ++idx[i] == n) idx[i++] = 0;
        if (i == arity) break;
      }
    }
    // strict unitality on every slot
    Polynomial one = Polynomial::constant(pot.layout(), Scalar(1));
    for (int arity = 3; arity <= 4 && ok; ++arity) {
      for (int slot = 0; slot < arity && ok; ++slot) {
        for (int t = 0; t < 5; ++t) {
          auto args = random_mixed_tuple(pot, arity, rng);
          args[slot] = one;
          if (!ew.mu(args).is_zero()) {
            ok = false;
            detail = c.name + ": unitality fails at slot " + std::to_string(slot);
            break;
          }
        }
      }
    }
    // Sym(U)-multilinearity on random arguments, every slot
    Polynomial r = Polynomial::variable(pot.layout(), Block::Z, pot.m() - 1);
    for (int arity = 3; arity <= 4 && ok; ++arity) {
      for (int slot = 0; slot < arity && ok; ++slot) {
        for (int t = 0; t < 5; ++t) {
          auto args = random_mixed_tuple(pot, arity, rng);
          auto scaled = args;
          scaled[slot] = scaled[slot] * r;
          if (!(ew.mu(scaled) == ew.mu(args) * r)) {
            ok = false;
            detail = c.name + ": R-multilinearity fails at slot " + std::to_string(slot);
            break;
          }
        }
      }
    }
    if (!ok) break;
  }
  // Clifford degeneration: purely quadratic potentials kill all higher mu
  if (ok) {
    for (auto pot : {make_pot(1, 1, {"x1^2"}), make_pot(2, 1, {"x1^2 + x2^2"}),
                     make_pot(2, 2, {"x1^2 + x2^2", "x1*x2"})}) {
      EwAlgebra ew(pot);
      for (int arity = 3; arity <= 5 && ok; ++arity) {
        for (int t = 0; t < 20; ++t) {
          if (!ew.mu(random_mixed_tuple(*pot, arity, rng)).is_zero()) {
            ok = false;
            detail = "quadratic potential has a nonzero mu_" + std::to_string(arity);
            break;
          }
        }
      }
    }
  }
  report(2, "mu_n vs l_n, strict unitality, R-multilinearity, Clifford degeneration", ok, detail);
}

void criterion3_cross_evaluators() {
  bool ok = true;
  std::string detail;
  std::mt19937 rng(31337);
  int done = 0;
  std::vector<Corpus> pots = corpus();
  while (done < 200 && ok) {
    for (const auto& c : pots) {
      if (done >= 200) break;
      EwAlgebra ew(c.pot);
      std::uniform_int_distribution<int> ar(3, c.pot->n() >= 3 ? 4 : 5);
      int arity = ar(rng);
      auto args = random_mixed_tuple(*c.pot, arity, rng);
      Polynomial a = ew.mu(args);
      Polynomial b = ew.mu_tree(args);
      ++done;
      if (!(a == b)) {
        ok = false;
        detail = c.name + ": formula evaluator gives " + a.str() + ", trees give " + b.str();
        break;
      }
    }
  }
  report(3, "formula evaluator agrees with the planar-tree evaluator", ok,
         ok ? std::to_string(done) + " random mu calls" : detail);
}

void criterion4_differentials() {
  bool ok = true;
  std::string detail;
  std::mt19937 rng(555);

  // delta_B, delta_C on exhaustive small bases plus random sweeps
  for (const auto& c : corpus()) {
    const Potential& pot = *c.pot;
    std::uniform_int_distribution<int> expd(0, 3), coin(0, 1), coeff(-3, 3);
    for (int trial = 0; trial < 25 && ok; ++trial) {
      Polynomial b(pot.layout()), cc(pot.layout());
      for (int t = 0; t < 4; ++t) {
        Monomial mb(pot.layout()), mc(pot.layout());
        for (int i = 0; i < pot.n(); ++i) mb.set_exp(Block::X, i, expd(rng));
        for (int j = 0; j < pot.m(); ++j) mb.set_exp(Block::W, j, coin(rng));
        for (int i = 0; i < pot.n(); ++i) mc.set_exp(Block::E, i, expd(rng));
        for (int j = 0; j < pot.m(); ++j) mc.set_exp(Block::Z, j, coin(rng));
        b.add_term(mb, Scalar(coeff(rng)));
        cc.add_term(mc, Scalar(coeff(rng)));
      }
      if (!delta_B(pot, delta_B(pot, b)).is_zero() ||
          !delta_C(pot, delta_C(pot, cc)).is_zero()) {
        ok = false;
        detail = c.name + ": delta_B or delta_C fails to square to zero";
      }
    }
    // delta_L^2 = 0 on random resolution elements
    std::uniform_int_distribution<int> zidx(0, pot.m() - 1);
    for (int trial = 0; trial < 25 && ok; ++trial) {
      ResolutionElement x = ResolutionElement::zero(pot);
      for (int t = 0; t < 3; ++t) {
        Monomial mono(pot.layout());
        mono.set_exp(Block::X, 0, 1 + expd(rng));
        if (pot.n() > 1) mono.set_exp(Block::X, 1, expd(rng));
        mono.set_exp(Block::Z, zidx(rng), 1);
        x.f1.add_term(mono, Scalar(coeff(rng)));
      }
      for (int i = 0; i < pot.n(); ++i) x.v[i] = coeff(rng);
      if (!resolution_differential(pot, resolution_differential(pot, x)).is_zero()) {
        ok = false;
        detail = c.name + ": delta_L fails to square to zero";
      }
    }
    // the L-infinity morphism identity, exhaustive to arity 5
    if (ok) {
      auto rep = check_linfty_morphism(pot, 5);
      if (!rep.passed) {
        ok = false;
        detail = c.name + ": " + rep.first_counterexample;
      }
    }
    if (!ok) break;
  }

  // delta_F and delta_G square to zero on windows
  if (ok) {
    auto pot = make_pot(1, 1, {"x1^3"});
    auto cache = std::make_shared<SWCache>(pot);
    auto ew = std::make_shared<EwAlgebra>(pot);
    ModulePresentation pres;
    pres.generators.push_back({"g", pot->group()->zero(), 0});
    pres.relations.push_back({parse_polynomial("x1^2", pot->layout())});
    auto mod = std::make_shared<ModuleComponents>(cache, pres);
    auto dual = std::make_shared<DualModuleComodule>(mod);
    FModule f(cache, ew, dual);
    Window win = cone_window(*pot, {pot->group()->zero()}, 4);
    auto rep = check_module_square_zero(f, win);
    if (!rep.passed) {
      ok = false;
      detail = "delta_F: " + rep.first_failure;
    }
    if (ok) {
      auto free_ew = std::make_shared<FreeEwModule>(ew);
      GComodule g(cache, ew, free_ew);
      for (const auto& cell : win.cells()) {
        Bidegree neg{-cell.a, cell.h};
        QMat d0 = comodule_differential_matrix(g, neg);
        QMat d1 = comodule_differential_matrix(g, {neg.a, neg.h + 1});
        if (d0.empty() || d1.empty()) continue;
        for (size_t j = 0; j < d0[0].size() && ok; ++j)
          for (size_t i = 0; i < d1.size() && ok; ++i) {
            Scalar acc(0);
            for (size_t k = 0; k < d0.size(); ++k) acc += d1[i][k] * d0[k][j];
            if (!is_zero(acc)) {
              ok = false;
              detail = "delta_G fails to square to zero at " + neg.str();
            }
          }
      }
    }
  }
  report(4, "morphism identity and delta^2 = 0 for B, C, L, F(N), G(M)", ok, detail);
}

void criterion5_bgg_oracle() {
  bool ok = true;
  std::string detail;
  struct Case {
    std::string pot_name;
    std::shared_ptr<Potential> pot;
  };
  std::vector<Case> pots = {{"x^2 z", make_pot(1, 1, {"x1^2"})},
                            {"x^3 z", make_pot(1, 1, {"x1^3"})},
                            {"(x^2+y^2) z", make_pot(2, 1, {"x1^2 + x2^2"})}};
  long cells = 0;
  for (const auto& pc : pots) {
    auto cache = std::make_shared<SWCache>(pc.pot);
    auto ew = std::make_shared<EwAlgebra>(pc.pot);
    std::vector<std::pair<std::string, ModulePresentation>> mods;
    mods.emplace_back("k", trivial_module(*pc.pot));
    ModulePresentation freep;
    freep.generators.push_back({"g", pc.pot->group()->zero(), 0});
    mods.emplace_back("S_W", freep);
    ModulePresentation cyc;
    cyc.generators.push_back({"g", pc.pot->group()->zero(), 0});
    cyc.relations.push_back({parse_polynomial(pc.pot->n() == 1 ? "x1^2" : "x1^2 + x2^2",
                                              pc.pot->layout())});
    mods.emplace_back("cyclic", cyc);
    if (pc.pot_name == "x^3 z") {
      ModulePresentation two;
      two.generators.push_back({"g", pc.pot->group()->zero(), 0});
      two.generators.push_back({"h", pc.pot->group()->degree({Int(1)}), 0});
      two.relations.push_back(
          {parse_polynomial("x1", pc.pot->layout()), Polynomial(pc.pot->layout())});
      two.relations.push_back(
          {Polynomial(pc.pot->layout()), parse_polynomial("x1^2", pc.pot->layout())});
      mods.emplace_back("two-generator", two);
    }
    for (const auto& [mname, pres] : mods) {
      auto mod = std::make_shared<ModuleComponents>(cache, pres);
      std::vector<Degree> tops;
      for (const auto& g : pres.generators) tops.push_back(-g.degree);
      Window win = cone_window(*pc.pot, tops, 4);
      auto oracle = ext_oracle(*mod, win);
      auto fside = f_of_module_cohomology(cache, ew, mod, win);
      for (const auto& [cell, dim] : oracle) {
        ++cells;
        if (fside.at(cell) != dim) {
          ok = false;
          detail = pc.pot_name + ", N = " + mname + " at " + cell.str() + ": H(F) = " +
                   std::to_string(fside.at(cell)) + " vs Ext = " + std::to_string(dim);
          break;
        }
      }
      if (!ok) break;
    }
    if (!ok) break;
  }
  report(5, "dim H(F(N)) equals the free-resolution Ext table (4-step windows)", ok,
         ok ? std::to_string(cells) + " window cells" : detail);
}

void criterion6_twisted_cochain() {
  bool ok = true;
  std::string detail;
  long checked = 0;
  for (const auto& c : corpus()) {
    auto cache = std::make_shared<SWCache>(c.pot);
    EwAlgebra ew(c.pot);
    Window win = cone_window(*c.pot, {c.pot->group()->zero()}, 4);
    auto rep = verify_twisted_cochain(*cache, ew, win.degrees);
    checked += rep.elements_checked;
    if (!rep.passed) {
      ok = false;
      detail = c.name + ": " + rep.first_counterexample;
      break;
    }
  }
  report(6, "generalized twisted cochain vanishes on every windowed C_W element", ok,
         ok ? std::to_string(checked) + " basis elements" : detail);
}

Fan fan_p2() {
  Fan f;
  f.rank = 2;
  f.rays = {{1, 0}, {0, 1}, {-1, -1}};
  f.max_cones = {{0, 1}, {1, 2}, {0, 2}};
  return f;
}
Fan fan_p1p1() {
  Fan f;
  f.rank = 2;
  f.rays = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  f.max_cones = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  return f;
}
Fan fan_p4() {
  Fan f;
  f.rank = 4;
  f.rays = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {-1, -1, -1, -1}};
  for (int drop = 4; drop >= 0; --drop) {
    std::vector<int> cone;
    for (int i = 0; i < 5; ++i)
      if (i != drop) cone.push_back(i);
    f.max_cones.push_back(cone);
  }
  return f;
}
Fan fan_wp112() {
  Fan f;
  f.rank = 2;
  f.rays = {{1, 0}, {0, 1}, {-1, -2}};
  f.max_cones = {{0, 1}, {1, 2}, {0, 2}};
  return f;
}

void criterion7_toric_goldens() {
  bool ok = true;
  std::string detail;
  {
    auto g = grading_from_fan(fan_p2());
    ok = ok && g.group->str() == "Z";
    for (const auto& d : g.ray_degrees) ok = ok && d == g.group->degree({Int(1)});
    ok = ok && irrelevant_components(fan_p2()) == std::vector<std::vector<int>>{{0, 1, 2}};
  }
  {
    auto g = grading_from_fan(fan_p1p1());
    ok = ok && g.group->str() == "Z^2";
    ok = ok && g.ray_degrees[0] == g.group->degree({Int(1), Int(0)});
    ok = ok && g.ray_degrees[1] == g.group->degree({Int(0), Int(1)});
    ok = ok && g.ray_degrees[2] == g.group->degree({Int(1), Int(0)});
    ok = ok && g.ray_degrees[3] == g.group->degree({Int(0), Int(1)});
    ok = ok &&
         irrelevant_components(fan_p1p1()) == std::vector<std::vector<int>>{{0, 2}, {1, 3}};
  }
  {
    auto g = grading_from_fan(fan_p4());
    ok = ok && g.group->str() == "Z";
    ok = ok && irrelevant_components(fan_p4()) ==
                   std::vector<std::vector<int>>{{0, 1, 2, 3, 4}};
  }
  {
    auto g = grading_from_fan(fan_wp112());
    ok = ok && g.group->str() == "Z";
    std::multiset<long> weights;
    for (const auto& d : g.ray_degrees) weights.insert(d.free_part()[0].get_si());
    ok = ok && weights == std::multiset<long>{1, 1, 2};
  }
  if (!ok) detail = "a fan invariant differs from the frozen value";
  report(7, "toric invariants for P^2, P^1xP^1, P^4, P(1,1,2) (CLI bytes: ctest golden_*)", ok,
         detail);
}

void criterion8_cy_and_generators() {
  bool ok = true;
  std::string detail;
  auto g4 = grading_from_fan(fan_p4());
  ok = ok && cy_check(g4.ray_degrees, {g4.group->degree({Int(5)})}).holds;
  ok = ok && !cy_check(g4.ray_degrees, {g4.group->degree({Int(4)})}).holds;
  auto g11 = grading_from_fan(fan_p1p1());
  ok = ok && cy_check(g11.ray_degrees, {g11.group->degree({Int(2), Int(2)})}).holds;

  auto sheaves_p4 = thick_subcategory_generators(fan_p4(), nullptr, ThickMode::Sheaves);
  ok = ok && sheaves_p4.generators.size() == 1;
  auto sheaves_p1p1 = thick_subcategory_generators(fan_p1p1(), nullptr, ThickMode::Sheaves);
  ok = ok && sheaves_p1p1.generators.size() == 2;
  auto sing = thick_subcategory_generators(fan_p4(), nullptr, ThickMode::Singularities);
  ok = ok && sing.generators.size() == 1 && sing.generators[0].description == "k with all A-shifts";
  if (!ok) detail = "CY verdicts or generator lists differ";
  report(8, "CY checks (quintic/quartic/(2,2)) and generator lists", ok, detail);
}

void criterion9_prop9_functor() {
  bool ok = true;
  std::string detail;
  // P^1 x P^1 with a generic (2,2) potential
  Fan fan = fan_p1p1();
  auto grading = grading_from_fan(fan);
  VarLayout lay{4, 1};
  Polynomial w = parse_polynomial("x1^2*x2^2 + x3^2*x4^2 + x1*x2*x3*x4", lay);
  GradingScheme gs{grading.group, grading.ray_degrees, {grading.group->degree({Int(2), Int(2)})}};
  auto pot = std::make_shared<Potential>(4, 1, std::vector<Polynomial>{w}, gs);
  auto cache = std::make_shared<SWCache>(pot);
  auto ew = std::make_shared<EwAlgebra>(pot);

  for (const auto& gamma : irrelevant_components(fan)) {
    auto m = std::make_shared<ExteriorQuotientModule>(ew, gamma);
    GComodule g(cache, ew, m);
    // 3-step window of A-degrees
    std::vector<Degree> degs;
    for (long a = 0; a <= 3; ++a)
      for (long b = 0; b <= 3 - a; ++b) degs.push_back(grading.group->degree({Int(a), Int(b)}));
    for (const auto& d : degs) {
      for (int t = 0; t <= static_cast<int>(gamma.size()); ++t) {
        // G(Lambda(V/V_Gamma)) at (-d, h = t) mirrors Lambda^t(L_Gamma) (x) S_W at d
        int lhs = g.dim({-d, t});
        int rhs = koszul_complex_dim(*cache, gamma, d, t);
        if (lhs != rhs) {
          ok = false;
          detail = "dim mismatch at degree " + d.str() + ", t = " + std::to_string(t) + ": " +
                   std::to_string(lhs) + " vs " + std::to_string(rhs);
          break;
        }
        if (t >= 1) {
          QMat dg = comodule_differential_matrix(g, {-d, t - 1});
          QMat dk = koszul_complex_differential(*cache, gamma, d, t);
          int rg = dg.empty() ? 0 : rank_of(dg);
          int rk = dk.empty() ? 0 : rank_of(dk);
          if (rg != rk) {
            ok = false;
            detail = "differential rank mismatch at degree " + d.str() + ", t = " +
                     std::to_string(t) + ": " + std::to_string(rg) + " vs " + std::to_string(rk);
            break;
          }
        }
      }
      if (!ok) break;
    }
    if (!ok) break;
  }
  report(9, "G(Lambda(V/V_Gamma)) matches the Koszul complex componentwise (P^1xP^1)", ok,
         detail);
}

}  // namespace

int main(int argc, char** argv) {
  (void)argc;
  (void)argv;
  criterion1_stasheff();
  criterion2_prop4();
  criterion3_cross_evaluators();
  criterion4_differentials();
  criterion5_bgg_oracle();
  criterion6_twisted_cochain();
  criterion7_toric_goldens();
  criterion8_cy_and_generators();
  criterion9_prop9_functor();
  if (g_failures == 0) {
    std::cout << "ACCEPTANCE: all criteria PASS" << std::endl;
    return 0;
  }
  std::cout << "ACCEPTANCE: " << g_failures << " criterion(s) FAILED" << std::endl;
  return 1;
}
