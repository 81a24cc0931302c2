// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tweetinform/labels.hpp"

namespace ti::nn {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape) noexcept;
std::string shape_string(const Shape& shape);

/// Graph node. Leaves (parameters, inputs) have no parents; every op output
/// records its parents and a closure that pushes its gradient to them.
struct Node {
    Shape shape;
    std::vector<double> value;
    std::vector<double> grad;
    bool requires_grad = false;
    std::vector<std::shared_ptr<Node>> parents;
    std::function<void(Node&)> backward;
    const char* op = "leaf";

    /// Grad buffer sized to the value, created on first use.
    std::vector<double>& grad_buffer();
};

/// Shared handle to a graph node. Copies alias the same storage.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::shared_ptr<Node> node) : node_(std::move(node)) {}

    static Tensor zeros(Shape shape, bool requires_grad = false);
    static Tensor from(Shape shape, std::vector<double> values, bool requires_grad = false);
    static Tensor scalar(double value, bool requires_grad = false);

    bool defined() const noexcept { return node_ != nullptr; }
    const Shape& shape() const { return node_->shape; }
    std::size_t rank() const { return node_->shape.size(); }
    std::size_t size() const { return node_->value.size(); }
    std::size_t rows() const;
    std::size_t cols() const;

    std::span<const double> data() const { return node_->value; }
    std::span<double> mutable_data() { return node_->value; }
    /// Empty span when no gradient has been accumulated yet.
    std::span<const double> grad() const { return node_->grad; }
    double item() const;

    bool requires_grad() const { return node_->requires_grad; }
    void set_requires_grad(bool flag) { node_->requires_grad = flag; }
    void zero_grad();

    const std::shared_ptr<Node>& node() const noexcept { return node_; }

private:
    std::shared_ptr<Node> node_;
};

/// While alive, ops on this thread record no graph (inference mode).
class NoGradGuard {
public:
    NoGradGuard();
    ~NoGradGuard();
    NoGradGuard(const NoGradGuard&) = delete;
    NoGradGuard& operator=(const NoGradGuard&) = delete;

private:
    bool previous_;
};

bool grad_enabled() noexcept;

/// Reverse-mode sweep from a scalar. Gradients accumulate into every
/// reachable node with requires_grad; leaves keep them until zero_grad().
void backward(const Tensor& loss);

// ---------------------------------------------------------------------------
// Differentiable ops. All tensors are row-major; 2-D ops take [rows, cols].
// Shape errors throw ti::ShapeError naming the op and the shapes involved.

Tensor matmul(const Tensor& a, const Tensor& b);    ///< [m,k] x [k,n]
Tensor matmul_nt(const Tensor& a, const Tensor& b); ///< [m,k] x [n,k]^T
Tensor add(const Tensor& a, const Tensor& b);       ///< same shape
Tensor add_row(const Tensor& a, const Tensor& row); ///< [m,n] + broadcast [n]
Tensor mul(const Tensor& a, const Tensor& b);       ///< elementwise
Tensor scale(const Tensor& a, double factor);
Tensor gelu(const Tensor& a);
Tensor tanh(const Tensor& a);
/// Softmax of a 2-D tensor along `axis` (0 or 1).
Tensor softmax(const Tensor& a, int axis = 1);
/// Row softmax restricted to the first `valid_cols` columns (rest exactly 0).
Tensor masked_softmax(const Tensor& a, std::size_t valid_cols);
Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps = 1e-12);
/// Inverted dropout with a mask derived from (seed, element index).
Tensor dropout(const Tensor& x, double rate, std::uint64_t seed);
/// Mean negative log-likelihood of integer labels under row-softmax(logits).
Tensor cross_entropy(const Tensor& logits, std::span<const ClassLabel> labels);
Tensor sum(const Tensor& a);

/// Rows of `table` [V,d] selected by `ids`.
Tensor embedding(const Tensor& table, std::span<const std::int32_t> ids);
Tensor slice_cols(const Tensor& a, std::size_t start, std::size_t count);
Tensor slice_rows(const Tensor& a, std::size_t start, std::size_t count);
Tensor concat_cols(std::span<const Tensor> parts);
/// Elementwise mean of same-shaped tensors.
Tensor mean_of(std::span<const Tensor> parts);
Tensor reshape(const Tensor& a, Shape shape);

/// Deterministic uniform in [0, 1) from a key; used by dropout.
double hash_uniform(std::uint64_t seed, std::uint64_t index) noexcept;
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;

} // namespace ti::nn
