#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "psihilfer/kernels.hpp"

namespace k = psihilfer::kernels;

namespace {

constexpr double kBeta = 0.6;
constexpr double kZeta = 0.76;

std::vector<double> smooth_samples(std::size_t n) {
    std::vector<double> x(n + 1);
    for (std::size_t i = 0; i <= n; ++i) x[i] = std::cos(static_cast<double>(i) / static_cast<double>(n));
    return x;
}

template <void (*Build)(double, double, double, k::TriangularTable&)>
void BM_BuildTable(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    k::TriangularTable table(n);
    for (auto _ : state) {
        Build(kBeta, kZeta, 1.0 / static_cast<double>(n), table);
        benchmark::DoNotOptimize(table.row(n).data());
    }
    state.SetComplexityN(state.range(0));
}

template <void (*Apply)(const k::TriangularTable&, std::span<const double>, std::span<double>)>
void BM_ApplyTable(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    k::TriangularTable table(n);
    k::build_weighted_table_serial(kBeta, kZeta, 1.0 / static_cast<double>(n), table);
    const auto x = smooth_samples(n);
    std::vector<double> out(n + 1);
    for (auto _ : state) {
        Apply(table, x, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <void (*Apply)(const k::ToeplitzWeights&, std::span<const double>, std::span<double>)>
void BM_ApplyToeplitz(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto weights = k::abel_toeplitz(k::abel_moments(kBeta, n), {}, 1.0);
    const auto x = smooth_samples(n);
    std::vector<double> out(n + 1);
    for (auto _ : state) {
        Apply(weights, x, out);
        benchmark::DoNotOptimize(out.data());
    }
}

}  // namespace

BENCHMARK(BM_BuildTable<k::build_weighted_table_serial>)->Name("build_table/serial")->RangeMultiplier(2)->Range(256, 2048);
BENCHMARK(BM_BuildTable<k::build_weighted_table_omp>)->Name("build_table/omp")->RangeMultiplier(2)->Range(256, 2048);
BENCHMARK(BM_ApplyTable<k::apply_table_serial>)->Name("apply_table/serial")->RangeMultiplier(2)->Range(256, 4096);
BENCHMARK(BM_ApplyTable<k::apply_table_omp>)->Name("apply_table/omp")->RangeMultiplier(2)->Range(256, 4096);
BENCHMARK(BM_ApplyToeplitz<k::apply_toeplitz_serial>)->Name("apply_toeplitz/serial")->RangeMultiplier(2)->Range(256, 4096);
BENCHMARK(BM_ApplyToeplitz<k::apply_toeplitz_omp>)->Name("apply_toeplitz/omp")->RangeMultiplier(2)->Range(256, 4096);

BENCHMARK_MAIN();
