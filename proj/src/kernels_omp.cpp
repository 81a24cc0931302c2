// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include "kernels_impl.hpp"
#include "tweetinform/kernels.hpp"

namespace ti::kernels {

namespace {

bool worth_parallel(std::size_t work) noexcept { return work >= kParallelThreshold; }

} // namespace

namespace omp {

void matmul(std::span<const double> a, std::span<const double> b, std::span<double> c, MatDims d,
            bool accumulate)
{
    const auto rows = static_cast<std::int64_t>(d.m);
#pragma omp parallel for schedule(static) if (worth_parallel(d.m * d.k * d.n))
    for (std::int64_t i = 0; i < rows; ++i) {
        detail::matmul_row(a, b, c, d, static_cast<std::size_t>(i), accumulate);
    }
}

void matmul_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
               MatDims d, bool accumulate)
{
    const auto rows = static_cast<std::int64_t>(d.m);
#pragma omp parallel for schedule(static) if (worth_parallel(d.m * d.k * d.n))
    for (std::int64_t i = 0; i < rows; ++i) {
        detail::matmul_nt_row(a, b, c, d, static_cast<std::size_t>(i), accumulate);
    }
}

void matmul_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
               MatDims d, bool accumulate)
{
    const auto rows = static_cast<std::int64_t>(d.m);
#pragma omp parallel for schedule(static) if (worth_parallel(d.m * d.k * d.n))
    for (std::int64_t i = 0; i < rows; ++i) {
        detail::matmul_tn_row(a, b, c, d, static_cast<std::size_t>(i), accumulate);
    }
}

void softmax_rows(std::span<const double> x, std::span<double> y, std::size_t rows,
                  std::size_t cols, std::size_t valid)
{
    const auto n = static_cast<std::int64_t>(rows);
#pragma omp parallel for schedule(static) if (worth_parallel(rows * cols * 8))
    for (std::int64_t r = 0; r < n; ++r) {
        detail::softmax_row(x, y, static_cast<std::size_t>(r), cols, valid);
    }
}

void softmax_rows_backward(std::span<const double> y, std::span<const double> dy,
                           std::span<double> dx, std::size_t rows, std::size_t cols)
{
    const auto n = static_cast<std::int64_t>(rows);
#pragma omp parallel for schedule(static) if (worth_parallel(rows * cols * 4))
    for (std::int64_t r = 0; r < n; ++r) {
        detail::softmax_row_backward(y, dy, dx, static_cast<std::size_t>(r), cols);
    }
}

void layer_norm_rows(std::span<const double> x, std::span<const double> gamma,
                     std::span<const double> beta, std::span<double> y, std::span<double> x_hat,
                     std::span<double> inv_std, std::size_t rows, std::size_t cols, double eps)
{
    const auto n = static_cast<std::int64_t>(rows);
#pragma omp parallel for schedule(static) if (worth_parallel(rows * cols * 4))
    for (std::int64_t r = 0; r < n; ++r) {
        detail::layer_norm_row(x, gamma, beta, y, x_hat, inv_std, static_cast<std::size_t>(r),
                               cols, eps);
    }
}

void gelu(std::span<const double> x, std::span<double> y)
{
    const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static) if (worth_parallel(x.size() * 16))
    for (std::int64_t i = 0; i < n; ++i) {
        y[static_cast<std::size_t>(i)] = detail::gelu_value(x[static_cast<std::size_t>(i)]);
    }
}

void gelu_backward(std::span<const double> x, std::span<const double> dy, std::span<double> dx)
{
    const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static) if (worth_parallel(x.size() * 16))
    for (std::int64_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        dx[k] += dy[k] * detail::gelu_derivative(x[k]);
    }
}

} // namespace omp

bool openmp_enabled() noexcept
{
#if defined(_OPENMP)
    return true;
#else
    return false;
#endif
}

int max_threads() noexcept
{
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace ti::kernels
