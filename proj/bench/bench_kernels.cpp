// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

// Serial reference kernels against their OpenMP counterparts.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "tweetinform/kernels.hpp"

namespace k = ti::kernels;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) {
        x = u(rng);
    }
    return v;
}

template <bool Parallel>
void BM_matmul(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_values(n * n, 1);
    const auto b = random_values(n * n, 2);
    std::vector<double> c(n * n);
    for (auto _ : state) {
        if constexpr (Parallel) {
            k::omp::matmul(a, b, c, {n, n, n});
        } else {
            k::serial::matmul(a, b, c, {n, n, n});
        }
        benchmark::DoNotOptimize(c.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * n * n * n));
}

template <bool Parallel>
void BM_matmul_nt(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_values(n * n, 3);
    const auto b = random_values(n * n, 4);
    std::vector<double> c(n * n);
    for (auto _ : state) {
        if constexpr (Parallel) {
            k::omp::matmul_nt(a, b, c, {n, n, n});
        } else {
            k::serial::matmul_nt(a, b, c, {n, n, n});
        }
        benchmark::DoNotOptimize(c.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * n * n * n));
}

template <bool Parallel>
void BM_softmax(benchmark::State& state)
{
    const auto rows = static_cast<std::size_t>(state.range(0));
    const std::size_t cols = 256;
    const auto x = random_values(rows * cols, 5);
    std::vector<double> y(x.size());
    for (auto _ : state) {
        if constexpr (Parallel) {
            k::omp::softmax_rows(x, y, rows, cols, cols);
        } else {
            k::serial::softmax_rows(x, y, rows, cols, cols);
        }
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows * cols));
}

template <bool Parallel>
void BM_layer_norm(benchmark::State& state)
{
    const auto rows = static_cast<std::size_t>(state.range(0));
    const std::size_t cols = 768;
    const auto x = random_values(rows * cols, 6);
    const auto gamma = random_values(cols, 7);
    const auto beta = random_values(cols, 8);
    std::vector<double> y(x.size());
    std::vector<double> x_hat(x.size());
    std::vector<double> inv_std(rows);
    for (auto _ : state) {
        if constexpr (Parallel) {
            k::omp::layer_norm_rows(x, gamma, beta, y, x_hat, inv_std, rows, cols, 1e-5);
        } else {
            k::serial::layer_norm_rows(x, gamma, beta, y, x_hat, inv_std, rows, cols, 1e-5);
        }
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows * cols));
}

template <bool Parallel>
void BM_gelu(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = random_values(n, 9);
    std::vector<double> y(n);
    for (auto _ : state) {
        if constexpr (Parallel) {
            k::omp::gelu(x, y);
        } else {
            k::serial::gelu(x, y);
        }
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

} // namespace

BENCHMARK_TEMPLATE(BM_matmul, false)->Name("matmul/serial")->RangeMultiplier(2)->Range(32, 256);
BENCHMARK_TEMPLATE(BM_matmul, true)->Name("matmul/omp")->RangeMultiplier(2)->Range(32, 256);
BENCHMARK_TEMPLATE(BM_matmul_nt, false)->Name("matmul_nt/serial")->RangeMultiplier(2)->Range(32, 256);
BENCHMARK_TEMPLATE(BM_matmul_nt, true)->Name("matmul_nt/omp")->RangeMultiplier(2)->Range(32, 256);
BENCHMARK_TEMPLATE(BM_softmax, false)->Name("softmax_rows/serial")->Range(16, 1024);
BENCHMARK_TEMPLATE(BM_softmax, true)->Name("softmax_rows/omp")->Range(16, 1024);
BENCHMARK_TEMPLATE(BM_layer_norm, false)->Name("layer_norm_rows/serial")->Range(16, 512);
BENCHMARK_TEMPLATE(BM_layer_norm, true)->Name("layer_norm_rows/omp")->Range(16, 512);
BENCHMARK_TEMPLATE(BM_gelu, false)->Name("gelu/serial")->Range(1 << 10, 1 << 20);
BENCHMARK_TEMPLATE(BM_gelu, true)->Name("gelu/omp")->Range(1 << 10, 1 << 20);

BENCHMARK_MAIN();
