#include <benchmark/benchmark.h>

#include <random>

#include "iforge/ci.hpp"
#include "iforge/cnf.hpp"
#include "iforge/interleaving.hpp"
#include "iforge/onesided.hpp"
#include "iforge/presentation.hpp"
#include "iforge/staircase.hpp"

using namespace iforge;

namespace {

CiInstance random_pattern(std::uint32_t n, std::uint64_t seed, double density) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution pick(density);
  CiInstance inst{n, PrimeField(2), {}, {}};
  for (std::uint32_t i = 1; i <= n; ++i)
    for (std::uint32_t j = 1; j <= n; ++j) {
      if (pick(rng)) inst.P.emplace_back(i, j);
      if (pick(rng)) inst.Q.emplace_back(i, j);
    }
  return inst;
}

Cnf3 random_formula(std::uint32_t vars, std::uint32_t clauses, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> var(0, vars - 1);
  std::bernoulli_distribution sign(0.5);
  Cnf3 f;
  f.numVars = vars;
  while (f.clauses.size() < clauses) {
    Clause3 c{Literal{var(rng), sign(rng)}, Literal{var(rng), sign(rng)}, Literal{var(rng), sign(rng)}};
    if (c[0].var == c[1].var || c[0].var == c[2].var || c[1].var == c[2].var) continue;
    f.clauses.push_back(c);
  }
  return f;
}

void BM_SolveCi(benchmark::State& state) {
  auto inst = random_pattern(static_cast<std::uint32_t>(state.range(0)), 7, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(solve_ci(inst));
}
BENCHMARK(BM_SolveCi)->DenseRange(2, 6);

void BM_SatThroughCi(benchmark::State& state) {
  auto f = random_formula(4, static_cast<std::uint32_t>(state.range(0)), 11);
  for (auto _ : state) {
    auto [gci, decoder] = sat3_to_gci(f, PrimeField(2));
    auto [ci, embedding] = gci_to_ci(gci);
    benchmark::DoNotOptimize(solve_ci(ci));
  }
}
BENCHMARK(BM_SatThroughCi)->DenseRange(1, 4);

void BM_GadgetDistance(benchmark::State& state) {
  auto [m, n] = ci_to_modules(random_pattern(static_cast<std::uint32_t>(state.range(0)), 3, 0.3));
  for (auto _ : state) benchmark::DoNotOptimize(interleaving_distance_staircase(m, n));
}
BENCHMARK(BM_GadgetDistance)->DenseRange(1, 4);

void BM_PresentedDecider(benchmark::State& state) {
  auto [m, n] = ci_to_modules(random_pattern(2, 5, 0.3));
  auto pm = sum_presentation(m), pn = sum_presentation(n);
  Rational eps(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(decide_interleaving_presented(pm, pn, eps));
}
BENCHMARK(BM_PresentedDecider)->Arg(1)->Arg(3);

void BM_WrapHom(benchmark::State& state) {
  auto [m, n] = ci_to_modules(random_pattern(2, 9, 0.3));
  auto w = indecomposable_wrap(m, wrap_anchor({&m, &n}));
  for (auto _ : state) benchmark::DoNotOptimize(hom_space(w, w));
}
BENCHMARK(BM_WrapHom);

void BM_SurjectionGadget(benchmark::State& state) {
  auto f = random_formula(static_cast<std::uint32_t>(state.range(0)), 3, 13);
  auto g = sat3_to_surjection(f, PrimeField(2));
  for (auto _ : state) benchmark::DoNotOptimize(exists_surjection(g.M, g.N));
}
BENCHMARK(BM_SurjectionGadget)->DenseRange(3, 5);

void BM_ShiftDistance(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> c(-50, 50);
  auto make = [&] {
    std::vector<Point2> pts;
    for (int k = 0; k < state.range(0); ++k) pts.push_back({Rational(c(rng)), Rational(c(rng))});
    return normalize(pts);
  };
  auto s = make(), t = make();
  for (auto _ : state) benchmark::DoNotOptimize(dshift_distance(s, t));
}
BENCHMARK(BM_ShiftDistance)->RangeMultiplier(4)->Range(4, 256);

}  // namespace
BENCHMARK_MAIN();
