// Micro/macro benchmarks for the numerical hot spots: cone projection,
// index reshuffling, the per-time-step reconstruction solve, and the
// exponential fitter.

#include <benchmark/benchmark.h>

#include <random>

#include "qpt/analysis.hpp"
#include "qpt/conic.hpp"
#include "qpt/maps.hpp"
#include "qpt/sim.hpp"
#include "qpt/tomography.hpp"

using namespace qpt;

namespace {

Mat random_hermitian16(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat m(16, 16);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) m(i, j) = Complex(n(rng), n(rng));
  return hermitize(m);
}

void bm_project_psd(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Mat h = random_hermitian16(rng);
  for (auto _ : state) benchmark::DoNotOptimize(project_psd(h));
}
BENCHMARK(bm_project_psd);

void bm_reshuffle(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const SuperoperatorMatrix phi{random_hermitian16(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(reshuffle(phi));
}
BENCHMARK(bm_reshuffle);

void bm_exponential_fit(benchmark::State& state) {
  DecaySeries s;
  for (double t : default_time_grid()) {
    s.times.push_back(t);
    s.values.push_back(0.08 * std::exp(-t / 0.24) + 1e-4);
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_exponential(s));
}
BENCHMARK(bm_exponential_fit);

void bm_relaxation_channel(benchmark::State& state) {
  SpinSystemParams p;
  RelaxationParams r;
  const DensityEstimate eq = equilibrium_state(p);
  for (auto _ : state) benchmark::DoNotOptimize(relaxation_channel(r, eq, 0.5));
}
BENCHMARK(bm_relaxation_channel);

void bm_process_solve(benchmark::State& state) {
  SpinSystemParams p;
  RelaxationParams r;
  const Dataset ds = generate_dataset(p, r, NoiseSpec{}, {0.0, 0.5});
  const StateTomographyResult init = initial_states(ds);
  const auto basis = build_operator_basis(build_mub_preparations());
  std::vector<SignalRecord> at_k;
  for (int l = 0; l < 20; ++l) at_k.push_back(ds.records[static_cast<std::size_t>(l)][1]);
  for (auto _ : state)
    benchmark::DoNotOptimize(process_tomography(init, at_k, basis));
}
BENCHMARK(bm_process_solve)->Unit(benchmark::kMillisecond)->MinTime(2.0);

}  // namespace

BENCHMARK_MAIN();
