#include <benchmark/benchmark.h>

#include <cmath>
#include <optional>

#include "catpacket/overlap.hpp"

using namespace catpacket;

namespace {

const GaussianProfile kProfile(std::sqrt(2.0), 6.363961030678928);

BarrierModel two_resonances() { return BreitWignerModel({Resonance(0.9, 0.032), Resonance(1.1, 0.038)}); }

void BM_EngineBuild(benchmark::State& state) {
  const auto disp = Dispersion::quadratic(1.0);
  const auto barrier = two_resonances();
  const double max_delay = static_cast<double>(state.range(0));
  for (auto _ : state) {
    OverlapEngine engine(kProfile, disp, barrier, {}, max_delay);
    benchmark::DoNotOptimize(engine.weight());
  }
}
BENCHMARK(BM_EngineBuild)->Arg(40)->Arg(160)->Arg(640)->Unit(benchmark::kMillisecond);

void BM_TransmittedEntry(benchmark::State& state) {
  const OverlapEngine engine(kProfile, Dispersion::quadratic(1.0), two_resonances(), {}, 160.0);
  double tau = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.transmitted_entry(tau));
    tau = tau < 160.0 ? tau + 0.37 : 0.0;
  }
  state.counters["panels"] = static_cast<double>(engine.grid().panels());
}
BENCHMARK(BM_TransmittedEntry);

void BM_TransmittedLadder(benchmark::State& state) {
  const auto modes = static_cast<std::size_t>(state.range(0));
  const double tau = 12.0;
  const OverlapEngine engine(kProfile, Dispersion::quadratic(1.0), two_resonances(), {},
                             tau * static_cast<double>(modes - 1));
  for (auto _ : state) benchmark::DoNotOptimize(engine.transmitted_ladder(modes, tau));
}
BENCHMARK(BM_TransmittedLadder)->Arg(2)->Arg(5)->Arg(20)->Unit(benchmark::kMicrosecond);

}  // namespace
