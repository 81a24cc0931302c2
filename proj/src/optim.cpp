// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tweetinform/optim.hpp"

#include <cmath>

#include "tweetinform/error.hpp"

namespace ti::nn {

Parameter::Parameter(std::string name, Tensor value) : name_(std::move(name)), value_(std::move(value))
{
    value_.set_requires_grad(true);
}

void Parameter::set_trainable(bool flag)
{
    trainable_ = flag;
    value_.set_requires_grad(flag);
}

Tensor ParameterStore::add(const std::string& name, Shape shape, std::vector<double> values)
{
    for (const auto& p : params_) {
        if (p.name() == name) {
            throw ValidationError("duplicate parameter '" + name + "'");
        }
    }
    params_.emplace_back(name, Tensor::from(std::move(shape), std::move(values), true));
    return params_.back().value();
}

Tensor ParameterStore::add_normal(const std::string& name, Shape shape, double stddev,
                                   std::mt19937_64& rng)
{
    std::normal_distribution<double> dist(0.0, stddev);
    std::vector<double> values(shape_size(shape));
    for (auto& v : values) {
        v = dist(rng);
    }
    return add(name, std::move(shape), std::move(values));
}

Tensor ParameterStore::add_constant(const std::string& name, Shape shape, double value)
{
    std::vector<double> values(shape_size(shape), value);
    return add(name, std::move(shape), std::move(values));
}

Parameter& ParameterStore::at(const std::string& name)
{
    for (auto& p : params_) {
        if (p.name() == name) {
            return p;
        }
    }
    throw ValidationError("no parameter named '" + name + "'");
}

const Parameter& ParameterStore::at(const std::string& name) const
{
    return const_cast<ParameterStore*>(this)->at(name);
}

void ParameterStore::set_trainable(const std::string& prefix, bool flag)
{
    for (auto& p : params_) {
        if (p.name().starts_with(prefix)) {
            p.set_trainable(flag);
        }
    }
}

void ParameterStore::zero_grad()
{
    for (auto& p : params_) {
        p.value().zero_grad();
    }
}

std::size_t ParameterStore::count_values() const noexcept
{
    std::size_t n = 0;
    for (const auto& p : params_) {
        n += p.value().size();
    }
    return n;
}

void ParameterStore::export_to(ArrayFile& file) const
{
    for (const auto& p : params_) {
        const auto& v = p.value();
        file.put(p.name(), v.shape(), std::vector<double>(v.data().begin(), v.data().end()));
    }
}

void ParameterStore::import_from(const ArrayFile& file)
{
    for (auto& p : params_) {
        const auto& a = file.get(p.name());
        if (a.dtype != DType::F64 || a.shape != p.value().shape()) {
            throw ValidationError("checkpoint array '" + p.name() + "' has shape " +
                                  shape_string(a.shape) + ", model expects " +
                                  shape_string(p.value().shape()));
        }
        std::copy(a.values.begin(), a.values.end(), p.value().mutable_data().begin());
    }
}

void AdamW::step(ParameterStore& store, double lr)
{
    if (!(lr >= 0.0)) {
        throw ValidationError("AdamW: learning rate must be >= 0");
    }
    auto& params = store.all();
    if (moments_.size() != params.size()) {
        moments_.resize(params.size());
    }
    // validate before mutating anything
    for (const auto& p : params) {
        if (!p.trainable()) {
            continue;
        }
        for (double g : p.value().grad()) {
            if (!std::isfinite(g)) {
                throw NumericError("AdamW: non-finite gradient in parameter '" + p.name() + "'");
            }
        }
    }
    ++steps_;
    const double t = static_cast<double>(steps_);
    const double bc1 = 1.0 - std::pow(config_.beta1, t);
    const double bc2 = 1.0 - std::pow(config_.beta2, t);
    const double decay = 1.0 - lr * config_.weight_decay;
    for (std::size_t k = 0; k < params.size(); ++k) {
        auto& p = params[k];
        if (!p.trainable()) {
            continue;
        }
        auto w = p.value().mutable_data();
        auto g = p.value().grad();
        auto& mo = moments_[k];
        if (mo.m.size() != w.size()) {
            mo.m.assign(w.size(), 0.0);
            mo.v.assign(w.size(), 0.0);
        }
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double gi = g.empty() ? 0.0 : g[i];
            mo.m[i] = config_.beta1 * mo.m[i] + (1.0 - config_.beta1) * gi;
            mo.v[i] = config_.beta2 * mo.v[i] + (1.0 - config_.beta2) * gi * gi;
            const double m_hat = mo.m[i] / bc1;
            const double v_hat = mo.v[i] / bc2;
            if (config_.weight_decay != 0.0) {
                w[i] *= decay;
            }
            w[i] -= lr * m_hat / (std::sqrt(v_hat) + config_.eps);
        }
    }
}

double linear_decay(std::size_t step, std::size_t total_steps, double lr0)
{
    if (total_steps == 0) {
        throw ValidationError("linear_decay: total_steps must be >= 1");
    }
    if (step > total_steps) {
        throw ValidationError("linear_decay: step " + std::to_string(step) + " exceeds total " +
                              std::to_string(total_steps));
    }
    return lr0 * (1.0 - static_cast<double>(step) / static_cast<double>(total_steps));
}

} // namespace ti::nn
