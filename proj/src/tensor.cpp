// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tweetinform/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "tweetinform/error.hpp"
#include "tweetinform/kernels.hpp"

namespace ti::nn {

namespace kern = ti::kernels::active;

namespace {
thread_local bool t_grad_enabled = true;
}

NoGradGuard::NoGradGuard() : previous_(t_grad_enabled) { t_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { t_grad_enabled = previous_; }
bool grad_enabled() noexcept { return t_grad_enabled; }

std::size_t shape_size(const Shape& shape) noexcept
{
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const Shape& shape)
{
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) {
            s += ",";
        }
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

std::vector<double>& Node::grad_buffer()
{
    if (grad.size() != value.size()) {
        grad.assign(value.size(), 0.0);
    }
    return grad;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad)
{
    auto n = std::make_shared<Node>();
    n->value.assign(shape_size(shape), 0.0);
    n->shape = std::move(shape);
    n->requires_grad = requires_grad;
    return Tensor(std::move(n));
}

Tensor Tensor::from(Shape shape, std::vector<double> values, bool requires_grad)
{
    if (shape_size(shape) != values.size()) {
        throw ShapeError("tensor: shape " + shape_string(shape) + " does not hold " +
                         std::to_string(values.size()) + " values");
    }
    auto n = std::make_shared<Node>();
    n->shape = std::move(shape);
    n->value = std::move(values);
    n->requires_grad = requires_grad;
    return Tensor(std::move(n));
}

Tensor Tensor::scalar(double value, bool requires_grad)
{
    return from({1}, {value}, requires_grad);
}

std::size_t Tensor::rows() const
{
    return node_->shape.size() == 2 ? node_->shape[0] : 1;
}

std::size_t Tensor::cols() const
{
    return node_->shape.empty() ? 1 : node_->shape.back();
}

double Tensor::item() const
{
    if (node_->value.size() != 1) {
        throw ShapeError("item() on tensor of shape " + shape_string(node_->shape));
    }
    return node_->value[0];
}

void Tensor::zero_grad()
{
    std::fill(node_->grad.begin(), node_->grad.end(), 0.0);
}

void backward(const Tensor& loss)
{
    if (!loss.defined() || loss.size() != 1) {
        throw ShapeError("backward: loss must be a scalar, got shape " +
                         (loss.defined() ? shape_string(loss.shape()) : std::string("<undefined>")));
    }
    if (!std::isfinite(loss.item())) {
        throw NumericError("backward: loss is not finite");
    }
    if (!loss.requires_grad()) {
        return;
    }
    // iterative post-order DFS -> topological order
    std::vector<Node*> order;
    std::unordered_set<Node*> visited;
    std::vector<std::pair<Node*, std::size_t>> stack{{loss.node().get(), 0}};
    visited.insert(loss.node().get());
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (next < node->parents.size()) {
            Node* p = node->parents[next++].get();
            if (p->requires_grad && visited.insert(p).second) {
                stack.emplace_back(p, 0);
            }
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }
    for (Node* n : order) {
        if (n->backward) {
            // interior nodes start from zero on every sweep
            n->grad.assign(n->value.size(), 0.0);
        }
    }
    loss.node()->grad_buffer()[0] += 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if ((*it)->backward) {
            (*it)->backward(**it);
        }
    }
}

namespace {

Tensor make_result(Shape shape, std::vector<std::shared_ptr<Node>> parents, const char* op)
{
    auto n = std::make_shared<Node>();
    n->value.assign(shape_size(shape), 0.0);
    n->shape = std::move(shape);
    n->op = op;
    n->requires_grad = t_grad_enabled && std::any_of(parents.begin(), parents.end(),
                                   [](const auto& p) { return p->requires_grad; });
    if (n->requires_grad) {
        n->parents = std::move(parents);
    }
    return Tensor(std::move(n));
}

[[noreturn]] void shape_fail(const char* op, const Tensor& a, const Tensor& b)
{
    throw ShapeError(std::string(op) + ": incompatible shapes " + shape_string(a.shape()) +
                     " and " + shape_string(b.shape()));
}

void require_2d(const char* op, const Tensor& a)
{
    if (a.rank() != 2) {
        throw ShapeError(std::string(op) + ": expected a 2-D tensor, got " + shape_string(a.shape()));
    }
}

// parent accessors inside backward closures
Node& parent(Node& self, std::size_t i) { return *self.parents[i]; }

} // namespace

Tensor matmul(const Tensor& a, const Tensor& b)
{
    require_2d("matmul", a);
    require_2d("matmul", b);
    if (a.shape()[1] != b.shape()[0]) {
        shape_fail("matmul", a, b);
    }
    const kernels::MatDims d{a.shape()[0], a.shape()[1], b.shape()[1]};
    auto out = make_result({d.m, d.n}, {a.node(), b.node()}, "matmul");
    kern::matmul(a.data(), b.data(), out.node()->value, d);
    if (out.requires_grad()) {
        out.node()->backward = [d](Node& self) {
            Node& pa = parent(self, 0);
            Node& pb = parent(self, 1);
            if (pa.requires_grad) {
                // dA[m,k] += dC[m,n] * B[k,n]^T
                kern::matmul_nt(self.grad, pb.value, pa.grad_buffer(), {d.m, d.n, d.k}, true);
            }
            if (pb.requires_grad) {
                // dB[k,n] += A[m,k]^T * dC[m,n]
                kern::matmul_tn(pa.value, self.grad, pb.grad_buffer(), {d.k, d.m, d.n}, true);
            }
        };
    }
    return out;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b)
{
    require_2d("matmul_nt", a);
    require_2d("matmul_nt", b);
    if (a.shape()[1] != b.shape()[1]) {
        shape_fail("matmul_nt", a, b);
    }
    const kernels::MatDims d{a.shape()[0], a.shape()[1], b.shape()[0]};
    auto out = make_result({d.m, d.n}, {a.node(), b.node()}, "matmul_nt");
    kern::matmul_nt(a.data(), b.data(), out.node()->value, d);
    if (out.requires_grad()) {
        out.node()->backward = [d](Node& self) {
            Node& pa = parent(self, 0);
            Node& pb = parent(self, 1);
            if (pa.requires_grad) {
                // dA[m,k] += dC[m,n] * B[n,k]
                kern::matmul(self.grad, pb.value, pa.grad_buffer(), {d.m, d.n, d.k}, true);
            }
            if (pb.requires_grad) {
                // dB[n,k] += dC[m,n]^T * A[m,k]
                kern::matmul_tn(self.grad, pa.value, pb.grad_buffer(), {d.n, d.m, d.k}, true);
            }
        };
    }
    return out;
}

Tensor add(const Tensor& a, const Tensor& b)
{
    if (a.shape() != b.shape()) {
        shape_fail("add", a, b);
    }
    auto out = make_result(a.shape(), {a.node(), b.node()}, "add");
    auto& v = out.node()->value;
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = a.data()[i] + b.data()[i];
    }
    if (out.requires_grad()) {
        out.node()->backward = [](Node& self) {
            for (std::size_t p = 0; p < 2; ++p) {
                Node& par = parent(self, p);
                if (par.requires_grad) {
                    auto& g = par.grad_buffer();
                    for (std::size_t i = 0; i < g.size(); ++i) {
                        g[i] += self.grad[i];
                    }
                }
            }
        };
    }
    return out;
}

Tensor add_row(const Tensor& a, const Tensor& row)
{
    require_2d("add_row", a);
    if (row.size() != a.shape()[1]) {
        shape_fail("add_row", a, row);
    }
    const std::size_t m = a.shape()[0];
    const std::size_t n = a.shape()[1];
    auto out = make_result(a.shape(), {a.node(), row.node()}, "add_row");
    auto& v = out.node()->value;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            v[i * n + j] = a.data()[i * n + j] + row.data()[j];
        }
    }
    if (out.requires_grad()) {
        out.node()->backward = [m, n](Node& self) {
            Node& pa = parent(self, 0);
            Node& pr = parent(self, 1);
            if (pa.requires_grad) {
                auto& g = pa.grad_buffer();
                for (std::size_t i = 0; i < g.size(); ++i) {
                    g[i] += self.grad[i];
                }
            }
            if (pr.requires_grad) {
                auto& g = pr.grad_buffer();
                for (std::size_t i = 0; i < m; ++i) {
                    for (std::size_t j = 0; j < n; ++j) {
                        g[j] += self.grad[i * n + j];
                    }
                }
            }
        };
    }
    return out;
}

Tensor mul(const Tensor& a, const Tensor& b)
{
    if (a.shape() != b.shape()) {
        shape_fail("mul", a, b);
    }
    auto out = make_result(a.shape(), {a.node(), b.node()}, "mul");
    auto& v = out.node()->value;
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = a.data()[i] * b.data()[i];
    }
    if (out.requires_grad()) {
        out.node()->backward = [](Node& self) {
            Node& pa = parent(self, 0);
            Node& pb = parent(self, 1);
            if (pa.requires_grad) {
                auto& g = pa.grad_buffer();
                for (std::size_t i = 0; i < g.size(); ++i) {
                    g[i] += self.grad[i] * pb.value[i];
                }
            }
            if (pb.requires_grad) {
                auto& g = pb.grad_buffer();
                for (std::size_t i = 0; i < g.size(); ++i) {
                    g[i] += self.grad[i] * pa.value[i];
                }
            }
        };
    }
    return out;
}

Tensor scale(const Tensor& a, double factor)
{
    auto out = make_result(a.shape(), {a.node()}, "scale");
    auto& v = out.node()->value;
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = a.data()[i] * factor;
    }
    if (out.requires_grad()) {
        out.node()->backward = [factor](Node& self) {
            auto& g = parent(self, 0).grad_buffer();
            for (std::size_t i = 0; i < g.size(); ++i) {
                g[i] += self.grad[i] * factor;
            }
        };
    }
    return out;
}

Tensor gelu(const Tensor& a)
{
    auto out = make_result(a.shape(), {a.node()}, "gelu");
    kern::gelu(a.data(), out.node()->value);
    if (out.requires_grad()) {
        out.node()->backward = [](Node& self) {
            Node& pa = parent(self, 0);
            kern::gelu_backward(pa.value, self.grad, pa.grad_buffer());
        };
    }
    return out;
}

Tensor tanh(const Tensor& a)
{
    auto out = make_result(a.shape(), {a.node()}, "tanh");
    auto& v = out.node()->value;
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = std::tanh(a.data()[i]);
    }
    if (out.requires_grad()) {
        out.node()->backward = [](Node& self) {
            auto& g = parent(self, 0).grad_buffer();
            for (std::size_t i = 0; i < g.size(); ++i) {
                g[i] += self.grad[i] * (1.0 - self.value[i] * self.value[i]);
            }
        };
    }
    return out;
}

namespace {

Tensor transpose2d(const Tensor& a)
{
    const std::size_t m = a.shape()[0];
    const std::size_t n = a.shape()[1];
    auto out = make_result({n, m}, {a.node()}, "transpose");
    auto& v = out.node()->value;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            v[j * m + i] = a.data()[i * n + j];
        }
    }
    if (out.requires_grad()) {
        out.node()->backward = [m, n](Node& self) {
            auto& g = parent(self, 0).grad_buffer();
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    g[i * n + j] += self.grad[j * m + i];
                }
            }
        };
    }
    return out;
}

} // namespace

Tensor masked_softmax(const Tensor& a, std::size_t valid_cols)
{
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    if (valid_cols == 0 || valid_cols > cols) {
        throw ShapeError("softmax: valid column count " + std::to_string(valid_cols) +
                         " outside [1, " + std::to_string(cols) + "]");
    }
    auto out = make_result(a.shape(), {a.node()}, "softmax");
    kern::softmax_rows(a.data(), out.node()->value, rows, cols, valid_cols);
    if (out.requires_grad()) {
        out.node()->backward = [rows, cols](Node& self) {
            kern::softmax_rows_backward(self.value, self.grad, parent(self, 0).grad_buffer(), rows,
                                        cols);
        };
    }
    return out;
}

Tensor softmax(const Tensor& a, int axis)
{
    if (axis == 1 || (axis == 0 && a.rank() == 1)) {
        return masked_softmax(a, a.cols());
    }
    if (axis == 0) {
        require_2d("softmax", a);
        return transpose2d(masked_softmax(transpose2d(a), a.shape()[0]));
    }
    throw ShapeError("softmax: axis " + std::to_string(axis) + " not in {0, 1}");
}

Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps)
{
    const std::size_t rows = x.rows();
    const std::size_t cols = x.cols();
    if (gamma.size() != cols || beta.size() != cols) {
        shape_fail("layer_norm", x, gamma);
    }
    auto out = make_result(x.shape(), {x.node(), gamma.node(), beta.node()}, "layer_norm");
    auto x_hat = std::make_shared<std::vector<double>>(x.size());
    auto inv_std = std::make_shared<std::vector<double>>(rows);
    kern::layer_norm_rows(x.data(), gamma.data(), beta.data(), out.node()->value, *x_hat, *inv_std,
                          rows, cols, eps);
    if (out.requires_grad()) {
        out.node()->backward = [rows, cols, x_hat, inv_std](Node& self) {
            Node& px = parent(self, 0);
            Node& pg = parent(self, 1);
            Node& pb = parent(self, 2);
            const auto& h = *x_hat;
            if (pg.requires_grad || pb.requires_grad) {
                auto& gg = pg.grad_buffer();
                auto& gb = pb.grad_buffer();
                for (std::size_t r = 0; r < rows; ++r) {
                    for (std::size_t j = 0; j < cols; ++j) {
                        const double dy = self.grad[r * cols + j];
                        if (pg.requires_grad) {
                            gg[j] += dy * h[r * cols + j];
                        }
                        if (pb.requires_grad) {
                            gb[j] += dy;
                        }
                    }
                }
            }
            if (px.requires_grad) {
                auto& gx = px.grad_buffer();
                const double inv_n = 1.0 / static_cast<double>(cols);
                for (std::size_t r = 0; r < rows; ++r) {
                    double sum_dh = 0.0;
                    double sum_dh_h = 0.0;
                    for (std::size_t j = 0; j < cols; ++j) {
                        const double dh = self.grad[r * cols + j] * pg.value[j];
                        sum_dh += dh;
                        sum_dh_h += dh * h[r * cols + j];
                    }
                    for (std::size_t j = 0; j < cols; ++j) {
                        const double dh = self.grad[r * cols + j] * pg.value[j];
                        gx[r * cols + j] += (*inv_std)[r] * (dh - inv_n * sum_dh -
                                                             h[r * cols + j] * inv_n * sum_dh_h);
                    }
                }
            }
        };
    }
    return out;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept
{
    // splitmix64 finalizer over the combined key
    std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double hash_uniform(std::uint64_t seed, std::uint64_t index) noexcept
{
    return static_cast<double>(mix_seed(seed, index) >> 11) * 0x1.0p-53;
}

Tensor dropout(const Tensor& x, double rate, std::uint64_t seed)
{
    if (rate < 0.0 || rate >= 1.0) {
        throw ValidationError("dropout rate must be in [0, 1)");
    }
    if (rate == 0.0) {
        return x;
    }
    auto mask = std::make_shared<std::vector<double>>(x.size());
    const double keep_scale = 1.0 / (1.0 - rate);
    for (std::size_t i = 0; i < mask->size(); ++i) {
        (*mask)[i] = hash_uniform(seed, i) >= rate ? keep_scale : 0.0;
    }
    auto out = make_result(x.shape(), {x.node()}, "dropout");
    auto& v = out.node()->value;
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = x.data()[i] * (*mask)[i];
    }
    if (out.requires_grad()) {
        out.node()->backward = [mask](Node& self) {
            auto& g = parent(self, 0).grad_buffer();
            for (std::size_t i = 0; i < g.size(); ++i) {
                g[i] += self.grad[i] * (*mask)[i];
            }
        };
    }
    return out;
}

Tensor cross_entropy(const Tensor& logits, std::span<const ClassLabel> labels)
{
    const std::size_t rows = logits.rows();
    const std::size_t cols = logits.cols();
    if (labels.size() != rows || cols != 2) {
        throw ShapeError("cross_entropy: logits " + shape_string(logits.shape()) + " vs " +
                         std::to_string(labels.size()) + " labels (expected [n,2])");
    }
    auto probs = std::make_shared<std::vector<double>>(logits.size());
    kern::softmax_rows(logits.data(), *probs, rows, cols, cols);
    auto out = make_result({1}, {logits.node()}, "cross_entropy");
    double loss = 0.0;
    std::vector<int> idx(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        idx[r] = label_index(labels[r]);
        const double* lr = logits.data().data() + r * cols;
        const double top = std::max(lr[0], lr[1]);
        const double lse = top + std::log(std::exp(lr[0] - top) + std::exp(lr[1] - top));
        loss += lse - lr[idx[r]];
    }
    out.node()->value[0] = loss / static_cast<double>(rows);
    if (out.requires_grad()) {
        out.node()->backward = [rows, cols, probs, idx = std::move(idx)](Node& self) {
            auto& g = parent(self, 0).grad_buffer();
            const double s = self.grad[0] / static_cast<double>(rows);
            for (std::size_t r = 0; r < rows; ++r) {
                for (std::size_t j = 0; j < cols; ++j) {
                    const double target = static_cast<int>(j) == idx[r] ? 1.0 : 0.0;
                    g[r * cols + j] += s * ((*probs)[r * cols + j] - target);
                }
            }
        };
    }
    return out;
}

Tensor sum(const Tensor& a)
{
    auto out = make_result({1}, {a.node()}, "sum");
    double acc = 0.0;
    for (double v : a.data()) {
        acc += v;
    }
    out.node()->value[0] = acc;
    if (out.requires_grad()) {
        out.node()->backward = [](Node& self) {
            auto& g = parent(self, 0).grad_buffer();
            for (auto& gi : g) {
                gi += self.grad[0];
            }
        };
    }
    return out;
}

Tensor embedding(const Tensor& table, std::span<const std::int32_t> ids)
{
    require_2d("embedding", table);
    const std::size_t vocab = table.shape()[0];
    const std::size_t d = table.shape()[1];
    for (auto id : ids) {
        if (id < 0 || static_cast<std::size_t>(id) >= vocab) {
            throw ShapeError("embedding: id " + std::to_string(id) + " outside table of " +
                             std::to_string(vocab) + " rows");
        }
    }
    std::vector<std::int32_t> rows(ids.begin(), ids.end());
    auto out = make_result({rows.size(), d}, {table.node()}, "embedding");
    auto& v = out.node()->value;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::copy_n(table.data().begin() + static_cast<std::ptrdiff_t>(rows[r] * d), d,
                    v.begin() + static_cast<std::ptrdiff_t>(r * d));
    }
    if (out.requires_grad()) {
        out.node()->backward = [d, rows = std::move(rows)](Node& self) {
            auto& g = parent(self, 0).grad_buffer();
            for (std::size_t r = 0; r < rows.size(); ++r) {
                for (std::size_t j = 0; j < d; ++j) {
                    g[static_cast<std::size_t>(rows[r]) * d + j] += self.grad[r * d + j];
                }
            }
        };
    }
    return out;
}

Tensor slice_cols(const Tensor& a, std::size_t start, std::size_t count)
{
    require_2d("slice_cols", a);
    const std::size_t m = a.shape()[0];
    const std::size_t n = a.shape()[1];
    if (start + count > n) {
        throw ShapeError("slice_cols: columns [" + std::to_string(start) + ", " +
                         std::to_string(start + count) + ") outside " + shape_string(a.shape()));
    }
    auto out = make_result({m, count}, {a.node()}, "slice_cols");
    auto& v = out.node()->value;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < count; ++j) {
            v[i * count + j] = a.data()[i * n + start + j];
        }
    }
    if (out.requires_grad()) {
        out.node()->backward = [m, n, start, count](Node& self) {
            auto& g = parent(self, 0).grad_buffer();
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < count; ++j) {
                    g[i * n + start + j] += self.grad[i * count + j];
                }
            }
        };
    }
    return out;
}

Tensor slice_rows(const Tensor& a, std::size_t start, std::size_t count)
{
    require_2d("slice_rows", a);
    const std::size_t m = a.shape()[0];
    const std::size_t n = a.shape()[1];
    if (start + count > m) {
        throw ShapeError("slice_rows: rows [" + std::to_string(start) + ", " +
                         std::to_string(start + count) + ") outside " + shape_string(a.shape()));
    }
    auto out = make_result({count, n}, {a.node()}, "slice_rows");
    std::copy_n(a.data().begin() + static_cast<std::ptrdiff_t>(start * n), count * n,
                out.node()->value.begin());
    if (out.requires_grad()) {
        out.node()->backward = [n, start](Node& self) {
            auto& g = parent(self, 0).grad_buffer();
            for (std::size_t i = 0; i < self.grad.size(); ++i) {
                g[start * n + i] += self.grad[i];
            }
        };
    }
    return out;
}

Tensor concat_cols(std::span<const Tensor> parts)
{
    if (parts.empty()) {
        throw ShapeError("concat_cols: no inputs");
    }
    const std::size_t m = parts[0].rows();
    std::size_t total = 0;
    std::vector<std::shared_ptr<Node>> nodes;
    std::vector<std::size_t> widths;
    for (const auto& p : parts) {
        if (p.rows() != m) {
            shape_fail("concat_cols", parts[0], p);
        }
        widths.push_back(p.cols());
        total += p.cols();
        nodes.push_back(p.node());
    }
    auto out = make_result({m, total}, std::move(nodes), "concat_cols");
    auto& v = out.node()->value;
    std::size_t offset = 0;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < widths[k]; ++j) {
                v[i * total + offset + j] = parts[k].data()[i * widths[k] + j];
            }
        }
        offset += widths[k];
    }
    if (out.requires_grad()) {
        out.node()->backward = [m, total, widths = std::move(widths)](Node& self) {
            std::size_t off = 0;
            for (std::size_t k = 0; k < widths.size(); ++k) {
                Node& p = parent(self, k);
                if (p.requires_grad) {
                    auto& g = p.grad_buffer();
                    for (std::size_t i = 0; i < m; ++i) {
                        for (std::size_t j = 0; j < widths[k]; ++j) {
                            g[i * widths[k] + j] += self.grad[i * total + off + j];
                        }
                    }
                }
                off += widths[k];
            }
        };
    }
    return out;
}

Tensor mean_of(std::span<const Tensor> parts)
{
    if (parts.empty()) {
        throw ShapeError("mean_of: no inputs");
    }
    std::vector<std::shared_ptr<Node>> nodes;
    for (const auto& p : parts) {
        if (p.shape() != parts[0].shape()) {
            shape_fail("mean_of", parts[0], p);
        }
        nodes.push_back(p.node());
    }
    const double inv = 1.0 / static_cast<double>(parts.size());
    auto out = make_result(parts[0].shape(), std::move(nodes), "mean_of");
    auto& v = out.node()->value;
    for (const auto& p : parts) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] += p.data()[i];
        }
    }
    for (auto& x : v) {
        x *= inv;
    }
    if (out.requires_grad()) {
        out.node()->backward = [inv](Node& self) {
            for (auto& p : self.parents) {
                if (p->requires_grad) {
                    auto& g = p->grad_buffer();
                    for (std::size_t i = 0; i < g.size(); ++i) {
                        g[i] += self.grad[i] * inv;
                    }
                }
            }
        };
    }
    return out;
}

Tensor reshape(const Tensor& a, Shape shape)
{
    if (shape_size(shape) != a.size()) {
        throw ShapeError("reshape: " + shape_string(a.shape()) + " -> " + shape_string(shape));
    }
    auto out = make_result(std::move(shape), {a.node()}, "reshape");
    std::copy(a.data().begin(), a.data().end(), out.node()->value.begin());
    if (out.requires_grad()) {
        out.node()->backward = [](Node& self) {
            auto& g = parent(self, 0).grad_buffer();
            for (std::size_t i = 0; i < g.size(); ++i) {
                g[i] += self.grad[i];
            }
        };
    }
    return out;
}

} // namespace ti::nn
