// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

#include "tweetinform/kernels.hpp"

// Per-row bodies shared by the serial and OpenMP kernels so both reduce in
// the same order.
namespace ti::kernels::detail {

inline void matmul_row(std::span<const double> a, std::span<const double> b, std::span<double> c,
                       MatDims d, std::size_t i, bool accumulate)
{
    double* crow = c.data() + i * d.n;
    if (!accumulate) {
        std::fill(crow, crow + d.n, 0.0);
    }
    const double* arow = a.data() + i * d.k;
    for (std::size_t p = 0; p < d.k; ++p) {
        const double av = arow[p];
        const double* brow = b.data() + p * d.n;
        for (std::size_t j = 0; j < d.n; ++j) {
            crow[j] += av * brow[j];
        }
    }
}

inline void matmul_nt_row(std::span<const double> a, std::span<const double> b,
                          std::span<double> c, MatDims d, std::size_t i, bool accumulate)
{
    const double* arow = a.data() + i * d.k;
    double* crow = c.data() + i * d.n;
    for (std::size_t j = 0; j < d.n; ++j) {
        const double* brow = b.data() + j * d.k;
        double acc = 0.0;
        for (std::size_t p = 0; p < d.k; ++p) {
            acc += arow[p] * brow[p];
        }
        crow[j] = accumulate ? crow[j] + acc : acc;
    }
}

// row i of a^T b: sum over p of a[p, i] * b[p, :]
inline void matmul_tn_row(std::span<const double> a, std::span<const double> b,
                          std::span<double> c, MatDims d, std::size_t i, bool accumulate)
{
    double* crow = c.data() + i * d.n;
    if (!accumulate) {
        std::fill(crow, crow + d.n, 0.0);
    }
    for (std::size_t p = 0; p < d.k; ++p) {
        const double av = a[p * d.m + i];
        if (av == 0.0) {
            continue;
        }
        const double* brow = b.data() + p * d.n;
        for (std::size_t j = 0; j < d.n; ++j) {
            crow[j] += av * brow[j];
        }
    }
}

inline void softmax_row(std::span<const double> x, std::span<double> y, std::size_t r,
                        std::size_t cols, std::size_t valid)
{
    const double* xr = x.data() + r * cols;
    double* yr = y.data() + r * cols;
    double top = xr[0];
    for (std::size_t j = 1; j < valid; ++j) {
        top = std::max(top, xr[j]);
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < valid; ++j) {
        yr[j] = std::exp(xr[j] - top);
        sum += yr[j];
    }
    for (std::size_t j = 0; j < valid; ++j) {
        yr[j] /= sum;
    }
    for (std::size_t j = valid; j < cols; ++j) {
        yr[j] = 0.0;
    }
}

inline void softmax_row_backward(std::span<const double> y, std::span<const double> dy,
                                 std::span<double> dx, std::size_t r, std::size_t cols)
{
    const double* yr = y.data() + r * cols;
    const double* dyr = dy.data() + r * cols;
    double* dxr = dx.data() + r * cols;
    double dot = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
        dot += yr[j] * dyr[j];
    }
    for (std::size_t j = 0; j < cols; ++j) {
        dxr[j] += yr[j] * (dyr[j] - dot);
    }
}

inline void layer_norm_row(std::span<const double> x, std::span<const double> gamma,
                           std::span<const double> beta, std::span<double> y,
                           std::span<double> x_hat, std::span<double> inv_std, std::size_t r,
                           std::size_t cols, double eps)
{
    const double* xr = x.data() + r * cols;
    double mean = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
        mean += xr[j];
    }
    mean /= static_cast<double>(cols);
    double var = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
        const double c = xr[j] - mean;
        var += c * c;
    }
    var /= static_cast<double>(cols);
    const double is = 1.0 / std::sqrt(var + eps);
    inv_std[r] = is;
    for (std::size_t j = 0; j < cols; ++j) {
        const double h = (xr[j] - mean) * is;
        x_hat[r * cols + j] = h;
        y[r * cols + j] = h * gamma[j] + beta[j];
    }
}

inline constexpr double kGeluC = 0.044715;

inline double gelu_value(double x) noexcept
{
    const double k = std::sqrt(2.0 / std::numbers::pi);
    return 0.5 * x * (1.0 + std::tanh(k * (x + kGeluC * x * x * x)));
}

inline double gelu_derivative(double x) noexcept
{
    const double k = std::sqrt(2.0 / std::numbers::pi);
    const double u = k * (x + kGeluC * x * x * x);
    const double t = std::tanh(u);
    const double du = k * (1.0 + 3.0 * kGeluC * x * x);
    return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * du;
}

} // namespace ti::kernels::detail
