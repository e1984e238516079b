#include <benchmark/benchmark.h>

#include <cmath>

#include "catpacket/sweep.hpp"

using namespace catpacket;

namespace {

void BM_Sweep(benchmark::State& state) {
  SweepSpec spec;
  spec.profile = GaussianProfile(std::sqrt(2.0), 6.363961030678928);
  spec.barrier = BreitWignerModel({Resonance(0.9, 0.032), Resonance(1.1, 0.038)});
  spec.modes = static_cast<std::size_t>(state.range(0));
  spec.tau_max = 60.0;
  spec.n_tau = 200;
  spec.threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec));
}
BENCHMARK(BM_Sweep)
    ->Args({2, 1})
    ->Args({2, 0})
    ->Args({5, 0})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

}  // namespace
