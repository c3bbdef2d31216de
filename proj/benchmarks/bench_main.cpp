// Microbenchmarks for the hot paths: the O(n_scan * n_grid) scan synthesis,
// the matching inverse transform, and the envelope fit.

#include <benchmark/benchmark.h>

#include "pairspec/biphoton.hpp"
#include "pairspec/interferometer.hpp"
#include "pairspec/spectroscopy.hpp"

using namespace pairspec;

namespace {

const double kDl = 0.7506;

SpectralDensity marginal_with(int n_points) {
  auto grid = default_grid(kDl, 0.3511, n_points, 20.0);
  return signal_marginal(build_state(grid, kDl, 0.3511));
}

MichelsonConfig scan_with(double half_span_um) {
  MichelsonConfig mc;
  mc.scan_min_um = -half_span_um;
  mc.scan_max_um = half_span_um;
  mc.noise = NoiseModel::none;
  return mc;
}

void bm_simulate_scan(benchmark::State& state) {
  auto marginal = marginal_with(static_cast<int>(state.range(0)));
  auto mc = scan_with(static_cast<double>(state.range(1)));
  for (auto _ : state) {
    auto gram = simulate_scan(marginal, mc);
    benchmark::DoNotOptimize(gram.counts.data());
  }
  state.SetItemsProcessed(state.iterations() * mc.n_points());
}

void bm_recover_spectrum(benchmark::State& state) {
  auto marginal = marginal_with(static_cast<int>(state.range(0)));
  auto gram = simulate_scan(marginal, scan_with(150.0));
  RecoveryOptions opts;
  opts.target_grid = marginal.grid;
  for (auto _ : state) {
    auto rec = recover_spectrum(gram, opts);
    benchmark::DoNotOptimize(rec.weights.data());
  }
  state.SetItemsProcessed(state.iterations() * marginal.grid.n_points);
}

void bm_extract_envelope(benchmark::State& state) {
  auto gram = simulate_scan(marginal_with(2001), scan_with(150.0));
  for (auto _ : state) {
    auto env = extract_envelope(gram);
    benchmark::DoNotOptimize(env.visibility.data());
  }
}

void bm_fit_notch(benchmark::State& state) {
  auto env = extract_envelope(simulate_scan(marginal_with(2001), scan_with(150.0)));
  for (auto _ : state) {
    auto fit = fit_notch(env);
    benchmark::DoNotOptimize(&fit);
  }
}

void bm_poisson_scan(benchmark::State& state) {
  auto marginal = marginal_with(801);
  auto mc = scan_with(150.0);
  mc.noise = NoiseModel::poisson;
  for (auto _ : state) {
    mc.seed += 1;  // defeat any caching without changing the workload
    auto gram = simulate_scan(marginal, mc);
    benchmark::DoNotOptimize(gram.counts.data());
  }
}

}  // namespace

BENCHMARK(bm_simulate_scan)->Args({1001, 50})->Args({4001, 150})->Unit(benchmark::kMillisecond);
BENCHMARK(bm_recover_spectrum)->Arg(1001)->Arg(4001)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_extract_envelope)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_fit_notch)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_poisson_scan)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
