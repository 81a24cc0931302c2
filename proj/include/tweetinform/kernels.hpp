// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>

// Dense row-major kernels behind the autodiff ops. `serial` is the reference
// implementation; `omp` splits the outer loops across OpenMP threads. Every
// output element is reduced by exactly one thread in the same order as the
// serial loop, so the two variants are bit-identical for any thread count.
namespace ti::kernels {

/// Problem sizes below this many multiply-adds stay on one thread.
inline constexpr std::size_t kParallelThreshold = 1u << 15;

struct MatDims {
    std::size_t m; ///< rows of the output
    std::size_t k; ///< reduction length
    std::size_t n; ///< columns of the output
};

namespace serial {

/// c = a[m,k] * b[k,n] (or c += when accumulate)
void matmul(std::span<const double> a, std::span<const double> b, std::span<double> c, MatDims d,
            bool accumulate = false);
/// c = a[m,k] * b[n,k]^T
void matmul_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
               MatDims d, bool accumulate = false);
/// c = a[k,m]^T * b[k,n]
void matmul_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
               MatDims d, bool accumulate = false);

/// Row softmax over the first `valid` columns; the remaining columns get 0.
void softmax_rows(std::span<const double> x, std::span<double> y, std::size_t rows,
                  std::size_t cols, std::size_t valid);
/// dx += y * (dy - <dy, y>) per row
void softmax_rows_backward(std::span<const double> y, std::span<const double> dy,
                           std::span<double> dx, std::size_t rows, std::size_t cols);

/// Per-row normalization; writes the normalized x_hat and 1/sigma per row.
void layer_norm_rows(std::span<const double> x, std::span<const double> gamma,
                     std::span<const double> beta, std::span<double> y, std::span<double> x_hat,
                     std::span<double> inv_std, std::size_t rows, std::size_t cols, double eps);

/// tanh-approximation GELU
void gelu(std::span<const double> x, std::span<double> y);
void gelu_backward(std::span<const double> x, std::span<const double> dy, std::span<double> dx);

} // namespace serial

namespace omp {

void matmul(std::span<const double> a, std::span<const double> b, std::span<double> c, MatDims d,
            bool accumulate = false);
void matmul_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
               MatDims d, bool accumulate = false);
void matmul_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
               MatDims d, bool accumulate = false);
void softmax_rows(std::span<const double> x, std::span<double> y, std::size_t rows,
                  std::size_t cols, std::size_t valid);
void softmax_rows_backward(std::span<const double> y, std::span<const double> dy,
                           std::span<double> dx, std::size_t rows, std::size_t cols);
void layer_norm_rows(std::span<const double> x, std::span<const double> gamma,
                     std::span<const double> beta, std::span<double> y, std::span<double> x_hat,
                     std::span<double> inv_std, std::size_t rows, std::size_t cols, double eps);
void gelu(std::span<const double> x, std::span<double> y);
void gelu_backward(std::span<const double> x, std::span<const double> dy, std::span<double> dx);

} // namespace omp

/// True when the omp variants were compiled with OpenMP enabled.
bool openmp_enabled() noexcept;
int max_threads() noexcept;

#if defined(TWEETINFORM_SERIAL_KERNELS)
namespace active = serial;
#else
namespace active = omp;
#endif

} // namespace ti::kernels
