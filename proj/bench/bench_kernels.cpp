// Serial reference vs OpenMP kernel, same inputs.
//   ./bench_kernels --benchmark_filter=Mc

#include <benchmark/benchmark.h>

#include "jrc/comm_rates.hpp"
#include "jrc/scenarios.hpp"
#include "jrc/waveforms.hpp"

using namespace jrc;

static void BM_McRateSerial(benchmark::State& st) {
    const SystemConfig c = paper_defaults();
    for (auto _ : st) benchmark::DoNotOptimize(mc_rate_serial(c, Link::Uplink, 0.01, st.range(0), 1).mean);
}
static void BM_McRateParallel(benchmark::State& st) {
    const SystemConfig c = paper_defaults();
    for (auto _ : st) benchmark::DoNotOptimize(mc_rate(c, Link::Uplink, 0.01, st.range(0), 1).mean);
}
BENCHMARK(BM_McRateSerial)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_McRateParallel)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);

static SampledWaveform bench_waveform() {
    const SystemConfig c = paper_defaults();  // M = 32, L = 250000
    return lfm_pulse_train(c, random_codes(c.tx_antennas, in_pulse_sample_count(c), 1));
}

static void BM_MomentsSerial(benchmark::State& st) {
    const auto w = bench_waveform();
    for (auto _ : st) benchmark::DoNotOptimize(temporal_moments_serial(w, 6.7e-7).m_t2);
}
static void BM_MomentsParallel(benchmark::State& st) {
    const auto w = bench_waveform();
    for (auto _ : st) benchmark::DoNotOptimize(temporal_moments(w, 6.7e-7).m_t2);
}
BENCHMARK(BM_MomentsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MomentsParallel)->Unit(benchmark::kMillisecond);

static SweepSpec bench_sweep(const SystemConfig& c) {
    SweepSpec s{SweepAxis::TC, {}};
    for (int k = 5; k <= 50; k += 5) s.grid.push_back(k * c.t_r);
    return s;
}

static void BM_SweepSerial(benchmark::State& st) {
    const SystemConfig c = paper_defaults();
    const auto s = bench_sweep(c);
    for (auto _ : st) benchmark::DoNotOptimize(sweep_region_serial(c, SchemeSpec::alt_sic(), s).points.size());
}
static void BM_SweepParallel(benchmark::State& st) {
    const SystemConfig c = paper_defaults();
    const auto s = bench_sweep(c);
    for (auto _ : st) benchmark::DoNotOptimize(sweep_region(c, SchemeSpec::alt_sic(), s).points.size());
}
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
