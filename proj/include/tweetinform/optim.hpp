// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tweetinform/checkpoint.hpp"
#include "tweetinform/tensor.hpp"

namespace ti::nn {

/// Named trainable array. Freezing clears requires_grad on the value so no
/// graph is recorded through it and the optimizer skips it.
class Parameter {
public:
    Parameter(std::string name, Tensor value);

    const std::string& name() const noexcept { return name_; }
    const Tensor& value() const noexcept { return value_; }
    Tensor& value() noexcept { return value_; }
    bool trainable() const noexcept { return trainable_; }
    void set_trainable(bool flag);

private:
    std::string name_;
    Tensor value_;
    bool trainable_ = true;
};

/// Ordered parameter collection with prefix-based grouping (`global.`, `clf.`, ...).
class ParameterStore {
public:
    Tensor add(const std::string& name, Shape shape, std::vector<double> values);
    /// Normal(0, stddev) initialization from `rng`.
    Tensor add_normal(const std::string& name, Shape shape, double stddev, std::mt19937_64& rng);
    Tensor add_constant(const std::string& name, Shape shape, double value);

    std::vector<Parameter>& all() noexcept { return params_; }
    const std::vector<Parameter>& all() const noexcept { return params_; }
    Parameter& at(const std::string& name);
    const Parameter& at(const std::string& name) const;

    void set_trainable(const std::string& prefix, bool flag);
    void zero_grad();
    std::size_t count_values() const noexcept;

    /// Writes every parameter into `file` under its own name.
    void export_to(ArrayFile& file) const;
    /// Overwrites values from `file`; names and shapes must match exactly.
    void import_from(const ArrayFile& file);

private:
    std::vector<Parameter> params_;
};

struct AdamWConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
};

/// AdamW with decoupled weight decay: w <- w * (1 - lr * lambda), then
/// w <- w - lr * m_hat / (sqrt(v_hat) + eps) with bias-corrected moments.
class AdamW {
public:
    explicit AdamW(AdamWConfig config = {}) : config_(config) {}

    /// Updates every trainable parameter of `store` from its accumulated grad.
    /// Throws NumericError naming the parameter if a gradient is not finite.
    void step(ParameterStore& store, double lr);

    std::uint64_t step_count() const noexcept { return steps_; }
    const AdamWConfig& config() const noexcept { return config_; }

private:
    struct Moments {
        std::vector<double> m;
        std::vector<double> v;
    };

    AdamWConfig config_;
    std::uint64_t steps_ = 0;
    std::vector<Moments> moments_;
};

/// lr0 * (1 - step / total_steps). Throws when step > total_steps or total_steps == 0.
double linear_decay(std::size_t step, std::size_t total_steps, double lr0);

} // namespace ti::nn
