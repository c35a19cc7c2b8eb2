#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "kenv/abelian.hpp"
#include "kenv/ainfty.hpp"
#include "kenv/koszul.hpp"
#include "kenv/parse.hpp"

namespace {

using namespace kenv;

std::shared_ptr<Potential> make_pot(int n, int m, const std::vector<std::string>& ws) {
  VarLayout lay{n, m};
  std::vector<Polynomial> polys;
  for (const auto& w : ws) polys.push_back(parse_polynomial(w, lay));
  return std::make_shared<Potential>(n, m, polys);
}

void BM_PolynomialProduct(benchmark::State& state) {
  VarLayout lay{3, 1};
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> expd(0, 4), coeff(-9, 9);
  Polynomial a(lay), b(lay);
  for (int t = 0; t < 20; ++t) {
    Monomial ma(lay), mb(lay);
    for (int i = 0; i < 3; ++i) {
      ma.set_exp(Block::X, i, expd(rng));
      mb.set_exp(Block::X, i, expd(rng));
    }
    a.add_term(ma, Scalar(coeff(rng)));
    b.add_term(mb, Scalar(coeff(rng)));
  }
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_PolynomialProduct);

void BM_SmithNormalForm(benchmark::State& state) {
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> entry(-20, 20);
  int n = static_cast<int>(state.range(0));
  IMat m(n, IVec(n));
  for (auto& row : m)
    for (auto& v : row) v = entry(rng);
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(m));
}
BENCHMARK(BM_SmithNormalForm)->Arg(6)->Arg(10);

void BM_MuCubic(benchmark::State& state) {
  // fresh algebra per iteration: measures the uncached series evaluation
  auto pot = make_pot(1, 1, {"x1^4"});
  Polynomial e = Polynomial::variable(pot->layout(), Block::E, 0);
  for (auto _ : state) {
    EwAlgebra ew(pot);
    benchmark::DoNotOptimize(ew.mu({e, e, e, e}));
  }
}
BENCHMARK(BM_MuCubic);

void BM_MuMemoized(benchmark::State& state) {
  auto pot = make_pot(2, 2, {"x1^3 + x1*x2^2", "x1^2*x2^2"});
  EwAlgebra ew(pot);
  Polynomial e1 = Polynomial::variable(pot->layout(), Block::E, 0);
  Polynomial e2 = Polynomial::variable(pot->layout(), Block::E, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ew.mu({e1, e2, e1, e2}));
  }
}
BENCHMARK(BM_MuMemoized);

void BM_KoszulHomologyCell(benchmark::State& state) {
  auto pot = make_pot(2, 2, {"x1^3", "x2^3"});
  std::vector<Degree> degs{pot->group()->degree({Int(4)})};
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_regular_sequence(*pot, degs, 1, 2));
  }
}
BENCHMARK(BM_KoszulHomologyCell);

}  // namespace

BENCHMARK_MAIN();
