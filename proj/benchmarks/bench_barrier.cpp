#include <benchmark/benchmark.h>

#include <vector>

#include "catpacket/barrier.hpp"

using namespace catpacket;

namespace {

// Alternating wells and walls, n segments in total.
PiecewiseConstantPotential staircase(int n) {
  std::vector<Segment> segments;
  for (int j = 0; j < n; ++j) {
    segments.push_back({0.5 * j, 0.5 * (j + 1), j % 2 == 0 ? 3.0 : 0.5});
  }
  return PiecewiseConstantPotential(std::move(segments));
}

void BM_ExactTransmission(benchmark::State& state) {
  const auto potential = staircase(static_cast<int>(state.range(0)));
  double p = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_transmission_prob(potential, 1.0, 0.5 * p * p));
    p = p < 3.0 ? p + 1e-3 : 0.3;
  }
}
BENCHMARK(BM_ExactTransmission)->RangeMultiplier(4)->Range(2, 512);

void BM_BreitWigner(benchmark::State& state) {
  std::vector<Resonance> res;
  for (int j = 0; j < state.range(0); ++j) res.emplace_back(0.5 + 0.1 * j, 0.02);
  const BarrierModel model = BreitWignerModel(res);
  const auto disp = Dispersion::quadratic(1.0);
  double p = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(transmission_prob(model, disp, p));
    p = p < 3.0 ? p + 1e-3 : 0.3;
  }
}
BENCHMARK(BM_BreitWigner)->Arg(1)->Arg(2)->Arg(16);

void BM_FindResonances(benchmark::State& state) {
  const auto potential = PiecewiseConstantPotential::double_barrier(5.0, 0.6, 1.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_resonance_peaks(potential, 1.0, 0.05, 5.0, {}));
  }
}
BENCHMARK(BM_FindResonances)->Unit(benchmark::kMillisecond);

}  // namespace
