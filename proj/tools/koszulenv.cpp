// Command-line front end: exact construction of the Koszul-dual enveloping
// algebra of a polynomial complete intersection, its higher products, the
// module functors, and the toric grading reports.

#include <CLI11.hpp>

#include <atomic>
#include <set>
#include <iostream>
#include <random>
#include <thread>

#include "kenv/ainfty.hpp"
#include "kenv/bgg.hpp"
#include "kenv/io.hpp"
#include "kenv/koszul.hpp"
#include "kenv/linfty.hpp"
#include "kenv/parse.hpp"
#include "kenv/toric.hpp"

namespace {

using namespace kenv;

constexpr int kExitVerificationFailure = 1;
constexpr int kExitInputError = 2;

// Deterministic parallel map: results land in input order regardless of the
// thread count.
template <typename F>
void parallel_for(int jobs, int count, F&& body) {
  if (jobs <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  int workers = std::min(jobs, count);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= count) return;
        body(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

std::string degree_list_str(const GroupPtr& group, const std::vector<Degree>& degs) {
  bool plain = group->free_rank() == 1 && group->torsion().empty();
  std::string out = "[";
  for (size_t i = 0; i < degs.size(); ++i) {
    if (i) out += ",";
    out += plain ? to_string(degs[i].free_part()[0]) : degs[i].str();
  }
  return out + "]";
}

std::string gamma_list_str(const std::vector<std::vector<int>>& gammas) {
  std::string out = "[";
  for (size_t i = 0; i < gammas.size(); ++i) {
    if (i) out += ", ";
    out += "{";
    for (size_t j = 0; j < gammas[i].size(); ++j) {
      if (j) out += ",";
      out += std::to_string(gammas[i][j] + 1);
    }
    out += "}";
  }
  return out + "]";
}

int cmd_grade_fan(const std::string& fan_path) {
  Fan fan = load_fan(fan_path);
  FanGrading grading = grading_from_fan(fan);
  auto gammas = irrelevant_components(fan);
  std::cout << "A = " << grading.group->str() << "; deg = "
            << degree_list_str(grading.group, grading.ray_degrees)
            << "; Gamma = " << gamma_list_str(gammas) << "\n";
  return 0;
}

int cmd_mu(const std::string& pot_path, int arity, const std::vector<std::string>& arg_texts,
           bool cross_check) {
  auto pot = load_potential(pot_path);
  if (arity < 2) throw std::invalid_argument("mu needs arity >= 2");
  if (static_cast<int>(arg_texts.size()) != arity)
    throw std::invalid_argument("expected " + std::to_string(arity) + " arguments");
  std::vector<Polynomial> args;
  for (const auto& text : arg_texts) {
    Polynomial a = parse_polynomial(text, pot->layout());
    if (!is_ew_element(a))
      throw std::invalid_argument("argument '" + text +
                                  "' is not in Lambda(V) (x) Sym(U) (use e_i, z_j)");
    args.push_back(std::move(a));
  }
  EwAlgebra ew(pot);
  Polynomial result = ew.mu(args);
  if (cross_check) {
    Polynomial other = ew.mu_tree(args);
    if (!(other == result)) {
      std::cout << "EVALUATOR MISMATCH: formula = " << result.str()
                << ", trees = " << other.str() << "\n";
      return kExitVerificationFailure;
    }
  }
  std::cout << result.str() << "\n";
  if (!result.is_zero()) {
    auto deg = pot->a_degree(result);
    int h = -1;
    bool mixed = false;
    for (const auto& [mono, c] : result.terms()) {
      int mh = ew_hdeg(mono);
      if (h < 0) h = mh;
      else if (h != mh) mixed = true;
    }
    std::cout << "bidegree: (" << (deg ? deg->str() : "?") << ", "
              << (mixed ? "mixed" : std::to_string(h)) << ")\n";
  }
  return 0;
}

int cmd_verify(const std::string& pot_path, const std::string& suite, int arity, int depth,
               int random_count, unsigned seed, int jobs) {
  auto pot = load_potential(pot_path);
  bool ok = true;

  if (suite == "stasheff") {
    auto ew = std::make_shared<EwAlgebra>(pot);
    for (int n = 3; n <= arity; ++n) {
      auto tuples = stasheff_tuple_pool(*ew, n, random_count, seed + n);
      std::vector<StasheffReport> reports(tuples.size());
      parallel_for(jobs, static_cast<int>(tuples.size()), [&](int i) {
        reports[i] = check_stasheff(*ew, arity, {tuples[i]});
      });
      StasheffReport merged;
      for (const auto& r : reports) {
        merged.identities_checked += r.identities_checked;
        if (!r.passed && merged.passed) {
          merged.passed = false;
          merged.first_counterexample = r.first_counterexample;
        }
      }
      std::cout << "stasheff arity " << n << ": " << (merged.passed ? "PASS" : "FAIL") << " ("
                << merged.identities_checked << " tuples)\n";
      if (!merged.passed) {
        std::cout << "  first counterexample: " << merged.first_counterexample << "\n";
        ok = false;
      }
    }
  } else if (suite == "linfty") {
    auto rep = check_linfty_morphism(*pot, arity);
    std::cout << "linfty morphism identity up to arity " << arity << ": "
              << (rep.passed ? "PASS" : "FAIL") << " (" << rep.checked << " tuples)\n";
    if (!rep.passed) {
      std::cout << "  first counterexample: " << rep.first_counterexample << "\n";
      ok = false;
    }
  } else if (suite == "twisted-cochain") {
    auto cache = std::make_shared<SWCache>(pot);
    auto ew = std::make_shared<EwAlgebra>(pot);
    Window win = cone_window(*pot, {pot->group()->zero()}, depth);
    auto rep = verify_twisted_cochain(*cache, *ew, win.degrees);
    std::cout << "twisted cochain on C_W window (depth " << depth
              << "): " << (rep.passed ? "PASS" : "FAIL") << " (" << rep.elements_checked
              << " basis elements)\n";
    if (!rep.passed) {
      std::cout << "  first counterexample: " << rep.first_counterexample << "\n";
      ok = false;
    }
  } else if (suite == "regularity") {
    std::vector<Degree> degrees;
    {
      Window base = cone_window(*pot, {pot->group()->zero()}, depth);
      std::set<Degree> degs;
      std::vector<Degree> beta_sums{pot->group()->zero()};
      for (int j = 0; j < pot->m(); ++j) {
        std::vector<Degree> next = beta_sums;
        for (const auto& b : beta_sums) next.push_back(b + pot->grading().beta[j]);
        beta_sums = std::move(next);
      }
      for (const auto& d : base.degrees)
        for (const auto& b : beta_sums) degs.insert(-d + b);
      degrees.assign(degs.begin(), degs.end());
    }
    // per-degree cells are independent; fan out under --jobs
    std::vector<RegularityReport> parts(degrees.size());
    parallel_for(jobs, static_cast<int>(degrees.size()), [&](int i) {
      parts[i] = check_regular_sequence(*pot, {degrees[i]}, 1, pot->m());
    });
    RegularityReport rep;
    for (auto& part : parts) {
      rep.any_nonvanishing = rep.any_nonvanishing || part.any_nonvanishing;
      rep.cells.merge(part.cells);
    }
    for (const auto& [cell, verdict] : rep.cells) {
      if (verdict == RegularityVerdict::NonvanishingHomology) {
        std::cout << "nonvanishing Koszul homology at " << cell.str() << "\n";
      }
    }
    std::cout << "regularity: " << (rep.any_nonvanishing ? "FAIL" : "PASS") << " — "
              << rep.summary() << "\n";
    ok = !rep.any_nonvanishing;
  } else if (suite == "koszul") {
    auto cache = std::make_shared<SWCache>(pot);
    Window win = cone_window(*pot, {pot->group()->zero()}, depth);
    bool dims_ok = true;
    for (const auto& d : win.degrees) {
      int s = cache->sw_dim(-d);
      int c = cache->cw_dim(d);
      if (s != c) {
        std::cout << "dim (S_W)_" << (-d).str() << " = " << s << " but dim (C_W)_" << d.str()
                  << " = " << c << "\n";
        dims_ok = false;
      }
    }
    std::cout << "S_W / C_W dimension pairing (depth " << depth
              << "): " << (dims_ok ? "PASS" : "FAIL") << "\n";
    bool sq_ok = true, adj_ok = true;
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> expd(0, 3), coin(0, 1), coeff(-3, 3);
    for (int trial = 0; trial < 40; ++trial) {
      Polynomial b(pot->layout()), c(pot->layout());
      for (int t = 0; t < 4; ++t) {
        Monomial mb(pot->layout()), mc(pot->layout());
        for (int i = 0; i < pot->n(); ++i) mb.set_exp(Block::X, i, expd(rng));
        for (int j = 0; j < pot->m(); ++j) mb.set_exp(Block::W, j, coin(rng));
        for (int i = 0; i < pot->n(); ++i) mc.set_exp(Block::E, i, expd(rng));
        for (int j = 0; j < pot->m(); ++j) mc.set_exp(Block::Z, j, coin(rng));
        b.add_term(mb, Scalar(coeff(rng)));
        c.add_term(mc, Scalar(coeff(rng)));
      }
      if (!delta_B(*pot, delta_B(*pot, b)).is_zero()) sq_ok = false;
      if (!delta_C(*pot, delta_C(*pot, c)).is_zero()) sq_ok = false;
      if (!(pairing_bc(delta_B(*pot, b), c) == pairing_bc(b, delta_C(*pot, c)))) adj_ok = false;
    }
    std::cout << "delta_B^2 = delta_C^2 = 0 (randomized): " << (sq_ok ? "PASS" : "FAIL") << "\n";
    std::cout << "adjointness <delta_B b, c> = <b, delta_C c>: " << (adj_ok ? "PASS" : "FAIL")
              << "\n";
    ok = dims_ok && sq_ok && adj_ok;
  } else {
    throw std::invalid_argument("unknown suite '" + suite +
                                "' (stasheff|linfty|twisted-cochain|regularity|koszul)");
  }

  std::cout << "RESULT: " << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? 0 : kExitVerificationFailure;
}

int cmd_ext(const std::string& pot_path, const std::string& mod_path,
            const std::string& window_path, int depth, int jobs, bool inject_fault) {
  auto pot = load_potential(pot_path);
  pot->require_no_linear_terms("ext");
  auto cache = std::make_shared<SWCache>(pot);
  auto ew = std::make_shared<EwAlgebra>(pot);
  auto pres = load_module(mod_path, *pot);
  auto mod = std::make_shared<ModuleComponents>(cache, pres);

  Window win;
  if (!window_path.empty()) {
    win = load_window(window_path, *pot);
  } else {
    std::vector<Degree> tops;
    for (const auto& g : pres.generators) tops.push_back(-g.degree);
    win = cone_window(*pot, tops, depth);
  }

  auto oracle = ext_oracle(*mod, win);
  if (inject_fault && !oracle.empty()) oracle.begin()->second += 1;  // test harness

  auto dual = std::make_shared<DualModuleComodule>(mod);
  FModule f(cache, ew, dual);
  auto cells = win.cells();
  std::vector<int> fdims(cells.size());
  parallel_for(jobs, static_cast<int>(cells.size()), [&](int i) {
    const auto& cell = cells[i];
    QMat d_here = module_differential_matrix(f, cell);
    QMat d_below = module_differential_matrix(f, {cell.a, cell.h - 1});
    int dim = f.dim(cell);
    fdims[i] = dim - (d_here.empty() ? 0 : rank_of(d_here)) -
               (d_below.empty() ? 0 : rank_of(d_below));
  });

  bool all_match = true;
  std::cout << "cell (alpha, i) | dim H(F(N)) | Ext^i(N,k)_alpha | diff\n";
  for (size_t i = 0; i < cells.size(); ++i) {
    int o = oracle.at(cells[i]);
    int d = fdims[i] - o;
    if (fdims[i] == 0 && o == 0) continue;
    std::cout << cells[i].str() << " | " << fdims[i] << " | " << o << " | " << d << "\n";
    if (d != 0) all_match = false;
  }
  std::cout << (all_match ? "MATCH: functor cohomology equals the Ext oracle on the window\n"
                          : "MISMATCH between functor cohomology and the Ext oracle\n");
  return all_match ? 0 : kExitVerificationFailure;
}

int cmd_cy(const std::string& fan_path, const std::string& pot_path, int probe_cap) {
  Fan fan = load_fan(fan_path);
  FanGrading grading = grading_from_fan(fan);
  auto raw = load_potential(pot_path);
  if (raw->n() != static_cast<int>(fan.rays.size()))
    throw std::invalid_argument("potential has " + std::to_string(raw->n()) +
                                " variables but the fan has " + std::to_string(fan.rays.size()) +
                                " rays");
  // regrade the equations by the fan
  std::vector<Degree> betas;
  for (int j = 0; j < raw->m(); ++j) {
    std::optional<Degree> bj;
    for (const auto& [mono, c] : raw->equation(j).terms()) {
      Degree d = grading.group->zero();
      for (int i = 0; i < raw->n(); ++i)
        if (int e = mono.exp(Block::X, i)) d = d + grading.ray_degrees[i] * e;
      if (!bj) bj = d;
      else if (!(*bj == d))
        throw std::invalid_argument("W" + std::to_string(j + 1) +
                                    " is not homogeneous for the fan grading");
    }
    betas.push_back(*bj);
  }
  GradingScheme gs{grading.group, grading.ray_degrees, betas};
  Potential pot(raw->n(), raw->m(), raw->equations(), gs);

  auto cy = cy_check(grading.ray_degrees, betas);
  std::cout << "CY: " << (cy.holds ? "true" : "false");
  if (!cy.holds) std::cout << "; witness = " << cy.witness->str();
  std::cout << "\n";

  auto sheaves = thick_subcategory_generators(fan, &pot, ThickMode::Sheaves, probe_cap);
  for (const auto& g : sheaves.generators)
    std::cout << "generator[sheaves]: " << g.description << "\n";
  auto sing = thick_subcategory_generators(fan, nullptr, ThickMode::Singularities, probe_cap);
  for (const auto& g : sing.generators)
    std::cout << "generator[singularities]: " << g.description << "\n";
  bool all_hold = true;
  for (const auto& s : sheaves.origin_support) {
    std::cout << "origin-support Gamma {";
    for (size_t i = 0; i < s.gamma.size(); ++i)
      std::cout << (i ? "," : "") << s.gamma[i] + 1;
    std::cout << "}: " << to_string(s.verdict) << " (" << s.note << ")\n";
    if (s.verdict != OriginSupport::HoldsInWindow) all_hold = false;
  }
  std::cout << "singularity-description hypotheses (trivial canonical class + origin support): "
            << (cy.holds && all_hold ? "hold in window" : "not established") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Koszul-dual enveloping algebras of complete intersections"};
  app.require_subcommand(1);
  int jobs = 1;
  app.add_option("--jobs", jobs, "worker threads for independent cells")->capture_default_str();

  std::string fan_path, pot_path, mod_path, window_path, suite;
  int arity = 4, depth = 4, random_count = 25, probe_cap = 6;
  unsigned seed = 20070414;
  std::vector<std::string> mu_args;
  int mu_arity = 0;
  bool mu_tree = false;

  auto* grade = app.add_subcommand("grade-fan", "grading group, ray degrees, irrelevant components");
  grade->add_option("fan", fan_path, "fan file (JSON)")->required();

  auto* mu = app.add_subcommand("mu", "evaluate a higher product mu_n");
  mu->add_option("potential", pot_path, "potential file (JSON)")->required();
  mu->add_option("arity", mu_arity, "arity n >= 2")->required();
  mu->add_option("args", mu_args, "n arguments in Lambda(V) (x) Sym(U) literal syntax")
      ->required();
  mu->add_flag("--tree", mu_tree, "cross-check with the planar-tree evaluator");

  auto* verify = app.add_subcommand("verify", "run an identity suite");
  verify->add_option("potential", pot_path)->required();
  verify->add_option("--suite", suite, "stasheff|linfty|twisted-cochain|regularity|koszul")
      ->required();
  verify->add_option("--arity", arity, "arity bound")->capture_default_str();
  verify->add_option("--depth", depth, "window depth")->capture_default_str();
  verify->add_option("--random", random_count, "random tuples per arity")->capture_default_str();
  verify->add_option("--seed", seed, "RNG seed")->capture_default_str();

  auto* ext = app.add_subcommand("ext", "windowed H(F(N)) against the free-resolution Ext oracle");
  ext->add_option("potential", pot_path)->required();
  ext->add_option("module", mod_path)->required();
  ext->add_option("--window", window_path, "window file (JSON)");
  ext->add_option("--depth", depth, "depth of the default cone window")->capture_default_str();
  bool inject_fault = false;
  ext->add_flag("--inject-fault", inject_fault,
                "perturb the oracle table by one (exercises the mismatch path)");

  auto* cy = app.add_subcommand("cy", "Calabi-Yau degree check and quotient reports for a fan");
  cy->add_option("fan", fan_path)->required();
  cy->add_option("potential", pot_path)->required();
  cy->add_option("--probe-cap", probe_cap, "total-degree cap for the origin-support probe")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (grade->parsed()) return cmd_grade_fan(fan_path);
    if (mu->parsed()) return cmd_mu(pot_path, mu_arity, mu_args, mu_tree);
    if (verify->parsed())
      return cmd_verify(pot_path, suite, arity, depth, random_count, seed, jobs);
    if (ext->parsed()) return cmd_ext(pot_path, mod_path, window_path, depth, jobs, inject_fault);
    if (cy->parsed()) return cmd_cy(fan_path, pot_path, probe_cap);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
