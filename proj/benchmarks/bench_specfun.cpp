#include <benchmark/benchmark.h>

#include <complex>

#include "mmmeta/specfun.hpp"

using cplx = std::complex<double>;
namespace sf = mmmeta::specfun;

static void BM_Gauss2F1Real(benchmark::State& st) {
    const double z = -static_cast<double>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(sf::gauss_2f1(1.5, -0.5, 0.5, z));
}
BENCHMARK(BM_Gauss2F1Real)->Arg(1)->Arg(100)->Arg(10000);

static void BM_Gauss2F1Imag(benchmark::State& st) {
    const cplx a(0.0, static_cast<double>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(sf::gauss_2f1(a, -0.5, 0.5, -10.0));
}
BENCHMARK(BM_Gauss2F1Imag)->Arg(1)->Arg(100)->Arg(1000);

static void BM_Kummer1F1(benchmark::State& st) {
    const double z = -static_cast<double>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(sf::kummer_1f1(0.5, 1.5, z));
}
BENCHMARK(BM_Kummer1F1)->Arg(1)->Arg(100)->Arg(1000);

static void BM_UpperGammaRatio(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(sf::upper_gamma_ratio(4, 3.5));
}
BENCHMARK(BM_UpperGammaRatio);
