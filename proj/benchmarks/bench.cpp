// Microbenchmarks for the norm routes, the modulus solve, and the certified
// limit evaluation. Instances are built outside the timed loops and sized by
// the benchmark argument.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "flatnorm/charge.hpp"
#include "flatnorm/family.hpp"
#include "flatnorm/generators.hpp"
#include "flatnorm/hypermeasure.hpp"
#include "flatnorm/metric_space.hpp"
#include "flatnorm/norm.hpp"

namespace {

using namespace flatnorm;

Charge dense_instance(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::uniform_real_distribution<double> weight(-3.0, 3.0);
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) rows.push_back({coord(rng), coord(rng)});
  auto space = build_euclidean_exact(std::move(rows));
  std::vector<std::pair<PointId, double>> w;
  w.reserve(static_cast<size_t>(n));
  for (PointId p = 0; p < n; ++p) w.push_back({p, weight(rng)});
  return Charge::from_weights(space, std::move(w));
}

void BM_NormPrimal(benchmark::State& state) {
  const Charge q = dense_instance(static_cast<int>(state.range(0)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(norm_primal(q).value);
}
BENCHMARK(BM_NormPrimal)->Arg(8)->Arg(32)->Arg(128);

void BM_NormDualFlow(benchmark::State& state) {
  const Charge q = dense_instance(static_cast<int>(state.range(0)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(norm_dual_flow(q).value);
}
BENCHMARK(BM_NormDualFlow)->Arg(8)->Arg(32)->Arg(128);

void BM_NormOracle(benchmark::State& state) {
  const Charge q = dense_instance(static_cast<int>(state.range(0)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(norm_oracle(q).value);
}
BENCHMARK(BM_NormOracle)->Arg(3)->Arg(5)->Arg(6);

void BM_QuasiModulus(benchmark::State& state) {
  const Charge q = dense_instance(static_cast<int>(state.range(0)), 23);
  const auto basis = default_basis(q.space(), 8);
  const Neighborhood nb{basis.anchor_sets.back(), basis.deltas.back()};
  for (auto _ : state)
    benchmark::DoNotOptimize(quasicontinuity_modulus(q, nb).value);
}
BENCHMARK(BM_QuasiModulus)->Arg(16)->Arg(64);

void BM_CanonicalEvaluate(benchmark::State& state) {
  const auto h = Hypermeasure::canonical_example();
  const auto identity = BLFunction::from_callable(
      [](const MetricSpace& s, PointId p) { return s.coords(p)[0]; }, 1.0, 1.0,
      "identity");
  double eps = 1.0;
  for (long k = 0; k < state.range(0); ++k) eps *= 0.1;
  for (auto _ : state)
    benchmark::DoNotOptimize(h.evaluate(identity, eps).value);
}
BENCHMARK(BM_CanonicalEvaluate)->Arg(3)->Arg(5)->Arg(6);

void BM_FamilyVerdict(benchmark::State& state) {
  const Family f = tight_grid_family(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(precompactness_verdict(f).verdict.size());
}
BENCHMARK(BM_FamilyVerdict)->Arg(4)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
