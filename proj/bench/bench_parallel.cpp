// OpenMP kernels against their serial references.
//
//   ./bench_parallel --benchmark_counters_tabular=true
//
// Arg(0) is the serial reference; Arg(n > 0) is the parallel path on n threads.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "combsense/grids.hpp"
#include "combsense/oracle.hpp"
#include "combsense/parallel.hpp"
#include "combsense/reference.hpp"
#include "combsense/spectroscopy.hpp"

using namespace combsense;

namespace {

const MapSpec fig2_spec{CombConfig::from_coupling(0.05, 0.0), AbsorberParams{},
                        kernel_forms::LorentzianCrossover{{6.0, 0.01, 0.020, 8.0}}, Regime::weak};

void apply_threads(benchmark::State& state)
{
    parallel::set_thread_count(static_cast<int>(state.range(0)));
    state.counters["threads"] = static_cast<double>(state.range(0));
}

void thread_args(benchmark::internal::Benchmark* b)
{
    b->Arg(0);
    for (int n = 1; n <= omp_get_num_procs(); n *= 2) {
        b->Arg(n);
    }
    b->Unit(benchmark::kMillisecond)->UseRealTime();
}

void BM_EfficiencyMap(benchmark::State& state)
{
    apply_threads(state);
    const auto temps = linear_grid(0.010, 0.050, 60);
    const auto delays = log_grid(1e-2, 1e2, 120);
    for (auto _ : state) {
        auto map = state.range(0) == 0 ? reference::efficiency_map(fig2_spec, temps, delays)
                                       : efficiency_map(fig2_spec, temps, delays);
        benchmark::DoNotOptimize(map.cells.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(temps.size() * delays.size()));
}
BENCHMARK(BM_EfficiencyMap)->Apply(thread_args);

void BM_CosineTransform(benchmark::State& state)
{
    apply_threads(state);
    const auto delays = log_grid(1e-3, 1e4, 2000);
    std::vector<double> k(delays.size());
    for (std::size_t i = 0; i < delays.size(); ++i) {
        k[i] = normalized_kernel(kernel_forms::OneOverF{0.1, 0.6}, delays[i], 0.03);
    }
    const auto est = invert_visibility(synthesize_sweep(delays, k, SweepMeta{}));
    const auto omegas = default_omega_grid();
    for (auto _ : state) {
        auto s = state.range(0) == 0 ? reference::cosine_transform(est, omegas) : cosine_transform(est, omegas);
        benchmark::DoNotOptimize(s.s_nn.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(omegas.size()));
}
BENCHMARK(BM_CosineTransform)->Apply(thread_args);

void BM_MonteCarloPhaseVariance(benchmark::State& state)
{
    apply_threads(state);
    const OracleConfig oracle{100000, 42, 0.02};
    const auto cfg = CombConfig{}.with_delay(10.0);
    const kernel_forms::LorentzianFixed lor{10.0};
    const AbsorberParams abs;
    for (auto _ : state) {
        auto e = state.range(0) == 0 ? reference::mc_phase_variance(cfg, lor, 0.03, abs, oracle)
                                     : mc_phase_variance(cfg, lor, 0.03, abs, oracle);
        benchmark::DoNotOptimize(e.mean);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(oracle.n_samples));
}
BENCHMARK(BM_MonteCarloPhaseVariance)->Apply(thread_args);

} // namespace

BENCHMARK_MAIN();
