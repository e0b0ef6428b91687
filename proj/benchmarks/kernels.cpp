#include <benchmark/benchmark.h>

#include <random>

#include "nlslab/multilinear.hpp"
#include "nlslab/solver.hpp"
#include "nlslab/symbols.hpp"

namespace {

using namespace nlslab;

Spectrum seeded(const Grid2D& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  Spectrum s(g);
  const int K = g.cutoff;
  for (int k1 = -K; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2) {
      const double re = n(rng);
      s.at(k1, k2) = cplx(re, n(rng)) / (1.0 + k1 * k1 + k2 * k2);
    }
  return s;
}

void BM_ForwardTransform(benchmark::State& state) {
  const Grid2D g = Grid2D::make(static_cast<int>(state.range(0)));
  const Field u = inverse_transform(seeded(g, 1));
  for (auto _ : state) benchmark::DoNotOptimize(forward_transform(u));
}
BENCHMARK(BM_ForwardTransform)->Arg(48)->Arg(64)->Arg(128);

void BM_CubicTerm(benchmark::State& state) {
  const Spectrum c = seeded(Grid2D::make(static_cast<int>(state.range(0))), 2);
  for (auto _ : state) benchmark::DoNotOptimize(cubic_term(c));
}
BENCHMARK(BM_CubicTerm)->Arg(48)->Arg(64)->Arg(128);

void BM_Lambda4Direct(benchmark::State& state) {
  const Spectrum c = seeded(Grid2D::make(static_cast<int>(state.range(0))), 3);
  const auto m = sigma4_symbol(IMethodParams::make(2, 0.6));
  for (auto _ : state) benchmark::DoNotOptimize(eval_lambda4_direct(m, c));
}
BENCHMARK(BM_Lambda4Direct)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Lambda4Separable(benchmark::State& state) {
  const Spectrum c = seeded(Grid2D::make(static_cast<int>(state.range(0))), 4);
  const auto m = sigma4_symbol(IMethodParams::make(2, 0.6));
  for (auto _ : state) benchmark::DoNotOptimize(eval_lambda4_separable(m, c));
}
BENCHMARK(BM_Lambda4Separable)->Arg(16)->Arg(48);

void BM_Lambda4SigmaTilde(benchmark::State& state) {
  const Spectrum c = seeded(Grid2D::make(static_cast<int>(state.range(0))), 5);
  const IMethodParams p = IMethodParams::make(4, 0.6);
  for (auto _ : state) benchmark::DoNotOptimize(lambda4_sigma4_tilde(c, p));
}
BENCHMARK(BM_Lambda4SigmaTilde)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_StepIfrk4(benchmark::State& state) {
  SolverState s;
  s.spectrum = seeded(Grid2D::make(static_cast<int>(state.range(0))), 6);
  for (auto _ : state) benchmark::DoNotOptimize(step_ifrk4(s, 1e-3));
}
BENCHMARK(BM_StepIfrk4)->Arg(48)->Arg(64);

void BM_StepStrang(benchmark::State& state) {
  SolverState s;
  s.spectrum = seeded(Grid2D::make(static_cast<int>(state.range(0))), 7);
  for (auto _ : state) benchmark::DoNotOptimize(step_strang(s, 1e-3));
}
BENCHMARK(BM_StepStrang)->Arg(48)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
