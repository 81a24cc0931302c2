// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "kernels_impl.hpp"
#include "tweetinform/kernels.hpp"

namespace ti::kernels::serial {

void matmul(std::span<const double> a, std::span<const double> b, std::span<double> c, MatDims d,
            bool accumulate)
{
    for (std::size_t i = 0; i < d.m; ++i) {
        detail::matmul_row(a, b, c, d, i, accumulate);
    }
}

void matmul_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
               MatDims d, bool accumulate)
{
    for (std::size_t i = 0; i < d.m; ++i) {
        detail::matmul_nt_row(a, b, c, d, i, accumulate);
    }
}

void matmul_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
               MatDims d, bool accumulate)
{
    for (std::size_t i = 0; i < d.m; ++i) {
        detail::matmul_tn_row(a, b, c, d, i, accumulate);
    }
}

void softmax_rows(std::span<const double> x, std::span<double> y, std::size_t rows,
                  std::size_t cols, std::size_t valid)
{
    for (std::size_t r = 0; r < rows; ++r) {
        detail::softmax_row(x, y, r, cols, valid);
    }
}

void softmax_rows_backward(std::span<const double> y, std::span<const double> dy,
                           std::span<double> dx, std::size_t rows, std::size_t cols)
{
    for (std::size_t r = 0; r < rows; ++r) {
        detail::softmax_row_backward(y, dy, dx, r, cols);
    }
}

void layer_norm_rows(std::span<const double> x, std::span<const double> gamma,
                     std::span<const double> beta, std::span<double> y, std::span<double> x_hat,
                     std::span<double> inv_std, std::size_t rows, std::size_t cols, double eps)
{
    for (std::size_t r = 0; r < rows; ++r) {
        detail::layer_norm_row(x, gamma, beta, y, x_hat, inv_std, r, cols, eps);
    }
}

void gelu(std::span<const double> x, std::span<double> y)
{
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = detail::gelu_value(x[i]);
    }
}

void gelu_backward(std::span<const double> x, std::span<const double> dy, std::span<double> dx)
{
    for (std::size_t i = 0; i < x.size(); ++i) {
        dx[i] += dy[i] * detail::gelu_derivative(x[i]);
    }
}

} // namespace ti::kernels::serial
