#include <benchmark/benchmark.h>

#include "mmmeta/mcsim.hpp"

using namespace mmmeta;

static void BM_Realization(benchmark::State& st) {
    const NetworkConfig cfg;
    mc::McOptions o;
    o.variant = static_cast<Variant>(st.range(0));
    std::uint64_t i = 0;
    for (auto _ : st) benchmark::DoNotOptimize(mc::sample_realization(cfg, 1, i++, o));
}
BENCHMARK(BM_Realization)->Arg(static_cast<int>(Variant::Hybrid))->Arg(static_cast<int>(Variant::UWaveOnly));

static void BM_Run(benchmark::State& st) {
    const NetworkConfig cfg;
    mc::McOptions o;
    o.n_realizations = static_cast<std::size_t>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(mc::run(cfg, {1.0, 1.0}, o));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Run)->Arg(10000)->Unit(benchmark::kMillisecond);
