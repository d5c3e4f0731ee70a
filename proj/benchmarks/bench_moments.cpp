#include <benchmark/benchmark.h>

#include "mmmeta/metadist.hpp"
#include "mmmeta/moments.hpp"

using namespace mmmeta;

static void BM_MomentReal(benchmark::State& st) {
    const NetworkConfig cfg;
    MomentEngine eng(cfg, LinkThresholds::from({1.0, 1.0}));
    for (auto _ : st) benchmark::DoNotOptimize(eng(2.0));
}
BENCHMARK(BM_MomentReal)->Unit(benchmark::kMicrosecond);

static void BM_MomentImaginary(benchmark::State& st) {
    const NetworkConfig cfg;
    MomentEngine eng(cfg, LinkThresholds::from({1.0, 1.0}));
    const double t = static_cast<double>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(eng(cplx(0.0, t)));
}
BENCHMARK(BM_MomentImaginary)->Arg(1)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

static void BM_MomentSeries(benchmark::State& st) {
    const NetworkConfig cfg;
    for (auto _ : st) benchmark::DoNotOptimize(moment_access(2.0, 1.0, cfg, EvalPath::Series));
}
BENCHMARK(BM_MomentSeries)->Unit(benchmark::kMicrosecond);

static void BM_BetaCurve(benchmark::State& st) {
    const NetworkConfig cfg;
    const std::vector<double> xs{0.1, 0.3, 0.5, 0.7, 0.9};
    for (auto _ : st) benchmark::DoNotOptimize(meta_sir(cfg, {1.0, 1.0}, xs, MetaMethod::BetaApprox));
}
BENCHMARK(BM_BetaCurve)->Unit(benchmark::kMillisecond);

static void BM_GilPelaezPoint(benchmark::State& st) {
    const NetworkConfig cfg;
    for (auto _ : st) benchmark::DoNotOptimize(meta_sir(cfg, {0.1, 0.1}, {0.3}, MetaMethod::GilPelaez));
}
BENCHMARK(BM_GilPelaezPoint)->Unit(benchmark::kMillisecond)->Iterations(1);
