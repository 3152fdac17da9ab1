#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "pmisc/adaptive.hpp"
#include "pmisc/metrics.hpp"
#include "pmisc/plateau.hpp"

using namespace pmisc;

namespace {

std::shared_ptr<NodeTable> leja_nodes() {
  return std::make_shared<NodeTable>(KnotFamily::symmetric_leja, LevelToKnots::two_step);
}

void BM_LejaSequence(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(leja_sequence(n));
}
BENCHMARK(BM_LejaSequence)->Arg(17)->Arg(65);

void BM_CombinationCoeffs(benchmark::State& state) {
  const auto set = smolyak_set(3, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(combination_coeffs(set));
  state.counters["indices"] = static_cast<double>(set.size());
}
BENCHMARK(BM_CombinationCoeffs)->Arg(4)->Arg(8);

void BM_SurrogateEvaluateMany(benchmark::State& state) {
  const Genz2dgpNoisy model(1);
  const auto s = build_reference(model, static_cast<int>(state.range(0)), MultiIndex{8});
  const auto pts = mc_points(1000, 2, 7);
  for (auto _ : state) benchmark::DoNotOptimize(s.evaluate_many(pts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pts.size()));
}
BENCHMARK(BM_SurrogateEvaluateMany)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_ToSpectral(benchmark::State& state) {
  const Genz2dgpNoisy model(1);
  const FixedFidelity fixed(model, MultiIndex{1});
  EvalCache cache;
  TermStore single(fixed, cache, leja_nodes());
  const auto s = assemble(smolyak_set(2, static_cast<int>(state.range(0))), single);
  for (auto _ : state) benchmark::DoNotOptimize(to_spectral(s));
}
BENCHMARK(BM_ToSpectral)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_FitChangePoint(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.2);
  std::vector<int> x(n);
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = i;
    y[i] = -0.5 * std::min(i, n / 2) + noise(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_change_point(x, y));
}
BENCHMARK(BM_FitChangePoint)->Arg(16)->Arg(64);

void BM_PlateauMiscGenz(benchmark::State& state) {
  const Genz2dgpNoisy model(1);
  for (auto _ : state) {
    EvalCache cache;
    TermStore store(model, cache, leja_nodes());
    AdaptConfig c;
    c.stopping.max_cost = static_cast<double>(state.range(0));
    benchmark::DoNotOptimize(run_plateau_misc(store, c));
  }
}
BENCHMARK(BM_PlateauMiscGenz)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Ks2(benchmark::State& state) {
  const auto a = mc_points(static_cast<std::size_t>(state.range(0)), 1, 1);
  const auto b = mc_points(static_cast<std::size_t>(state.range(0)), 1, 2);
  std::vector<double> va, vb;
  for (const auto& p : a) va.push_back(p[0]);
  for (const auto& p : b) vb.push_back(p[0]);
  for (auto _ : state) benchmark::DoNotOptimize(ks2(va, vb));
}
BENCHMARK(BM_Ks2)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
