// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tweetinform/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "tweetinform/error.hpp"
#include "util.hpp"

namespace ti {

namespace {

double sign_of(ClassLabel label) noexcept
{
    return label == ClassLabel::Informative ? 1.0 : -1.0;
}

double sigmoid(double z) noexcept
{
    if (z >= 0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(-m)) without overflow
double softplus_neg(double m) noexcept
{
    return m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
}

void check_training_set(std::span<const SparseVector> x, std::span<const ClassLabel> y)
{
    if (x.size() != y.size()) {
        throw ValidationError("feature/label count mismatch");
    }
    if (x.size() < 2) {
        throw ValidationError("need at least two training examples");
    }
    const auto pos = std::count(y.begin(), y.end(), ClassLabel::Informative);
    if (pos == 0 || pos == static_cast<std::ptrdiff_t>(y.size())) {
        throw ValidationError("training labels contain a single class");
    }
    const auto dim = x[0].dimension;
    for (const auto& row : x) {
        if (row.dimension != dim) {
            throw ShapeError("training rows have inconsistent dimensions");
        }
    }
}

void check_dimension(std::size_t expected, const SparseVector& x)
{
    if (x.dimension != expected) {
        throw ShapeError("baseline predict: model dimension " + std::to_string(expected) +
                         " vs input dimension " + std::to_string(x.dimension));
    }
}

template <class LossGrad>
LinearObjective linear_objective(const LinearModel& model, std::span<const SparseVector> x,
                                 std::span<const ClassLabel> y, double l2, LossGrad&& loss_grad)
{
    if (x.size() != y.size() || x.empty()) {
        throw ValidationError("objective needs equal, non-zero numbers of rows and labels");
    }
    LinearObjective obj;
    obj.grad_weights.assign(model.weights.size(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double s = sign_of(y[i]);
        const auto [loss, dloss_df] = loss_grad(s, model.decision(x[i]));
        obj.loss += loss * inv_n;
        for (const auto& [k, v] : x[i].entries) {
            obj.grad_weights[k] += dloss_df * v * inv_n;
        }
        obj.grad_bias += dloss_df * inv_n;
    }
    double sq = 0.0;
    for (std::size_t k = 0; k < model.weights.size(); ++k) {
        sq += model.weights[k] * model.weights[k];
        obj.grad_weights[k] += l2 * model.weights[k];
    }
    obj.loss += 0.5 * l2 * sq;
    return obj;
}

struct LogisticTerm {
    std::pair<double, double> operator()(double s, double f) const noexcept
    {
        return {softplus_neg(s * f), -s * sigmoid(-s * f)};
    }
};

struct HingeTerm {
    std::pair<double, double> operator()(double s, double f) const noexcept
    {
        const double margin = s * f;
        return margin < 1.0 ? std::pair{1.0 - margin, -s} : std::pair{0.0, 0.0};
    }
};

template <class LossGrad>
LinearModel train_linear(LinearKind kind, std::span<const SparseVector> x,
                         std::span<const ClassLabel> y, const LinearTrainOptions& options,
                         LossGrad loss_grad)
{
    check_training_set(x, y);
    if (options.lr <= 0 || options.l2 < 0 || options.epochs < 0) {
        throw ValidationError("linear training needs lr > 0, l2 >= 0, epochs >= 0");
    }
    LinearModel model;
    model.kind = kind;
    model.weights.assign(x[0].dimension, 0.0);
    const double shrink = 1.0 / (1.0 + options.lr * options.l2);
    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        // data-term gradient only; the L2 part is applied as the proximal shrink
        auto obj = linear_objective(model, x, y, 0.0, loss_grad);
        for (std::size_t k = 0; k < model.weights.size(); ++k) {
            model.weights[k] = (model.weights[k] - options.lr * obj.grad_weights[k]) * shrink;
        }
        model.bias -= options.lr * obj.grad_bias;
        if (!std::isfinite(model.bias)) {
            throw NumericError("linear training diverged at epoch " + std::to_string(epoch));
        }
    }
    return model;
}

} // namespace

double LinearModel::decision(const SparseVector& x) const
{
    return x.dot(weights) + bias;
}

LinearObjective logreg_objective(const LinearModel& model, std::span<const SparseVector> x,
                                 std::span<const ClassLabel> y, double l2)
{
    return linear_objective(model, x, y, l2, LogisticTerm{});
}

LinearObjective svm_objective(const LinearModel& model, std::span<const SparseVector> x,
                              std::span<const ClassLabel> y, double l2)
{
    return linear_objective(model, x, y, l2, HingeTerm{});
}

LinearModel train_logreg(std::span<const SparseVector> x, std::span<const ClassLabel> y,
                         const LinearTrainOptions& options)
{
    return train_linear(LinearKind::LogReg, x, y, options, LogisticTerm{});
}

LinearModel train_svm(std::span<const SparseVector> x, std::span<const ClassLabel> y,
                      const LinearTrainOptions& options)
{
    return train_linear(LinearKind::Svm, x, y, options, HingeTerm{});
}

NaiveBayesModel train_nb(std::span<const SparseVector> counts, std::span<const ClassLabel> y,
                         double alpha)
{
    if (!(alpha > 0.0)) {
        throw ValidationError("naive Bayes alpha must be > 0");
    }
    check_training_set(counts, y);
    const std::size_t dim = counts[0].dimension;
    std::array<std::vector<double>, 2> term_counts{std::vector<double>(dim, 0.0),
                                                   std::vector<double>(dim, 0.0)};
    std::array<double, 2> docs{0.0, 0.0};
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const int c = label_index(y[i]);
        docs[c] += 1.0;
        for (const auto& [k, v] : counts[i].entries) {
            if (v < 0) {
                throw ValidationError("naive Bayes requires non-negative counts");
            }
            term_counts[c][k] += v;
        }
    }
    NaiveBayesModel m;
    m.alpha = alpha;
    const double n = docs[0] + docs[1];
    for (int c = 0; c < 2; ++c) {
        m.log_prior[c] = std::log(docs[c] / n);
        double total = 0.0;
        for (double v : term_counts[c]) {
            total += v;
        }
        const double denom = std::log(total + alpha * static_cast<double>(dim));
        m.log_likelihood[c].resize(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            m.log_likelihood[c][k] = std::log(term_counts[c][k] + alpha) - denom;
        }
    }
    return m;
}

PredictionVector predict_baseline(const LinearModel& model, const SparseVector& x)
{
    check_dimension(model.weights.size(), x);
    const double f = model.decision(x);
    if (model.kind == LinearKind::Svm) {
        return f >= 0.0 ? PredictionVector{0.0, 1.0} : PredictionVector{1.0, 0.0};
    }
    const double p = sigmoid(f);
    return {1.0 - p, p};
}

PredictionVector predict_baseline(const NaiveBayesModel& model, const SparseVector& x)
{
    check_dimension(model.dimension(), x);
    std::array<double, 2> score = model.log_prior;
    for (int c = 0; c < 2; ++c) {
        for (const auto& [k, v] : x.entries) {
            score[c] += v * model.log_likelihood[c][k];
        }
    }
    const double top = std::max(score[0], score[1]);
    const double e0 = std::exp(score[0] - top);
    const double e1 = std::exp(score[1] - top);
    return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

std::string BaselinePipeline::kind_name() const
{
    if (std::holds_alternative<NaiveBayesModel>(model)) {
        return "nb";
    }
    return std::get<LinearModel>(model).kind == LinearKind::Svm ? "svm" : "logreg";
}

PredictionVector BaselinePipeline::predict(std::string_view text) const
{
    const auto counts = vocab.count(text);
    if (const auto* nb = std::get_if<NaiveBayesModel>(&model)) {
        return predict_baseline(*nb, counts);
    }
    return predict_baseline(std::get<LinearModel>(model), tfidf_transform(counts, vocab));
}

ArrayFile BaselinePipeline::to_arrays() const
{
    ArrayFile f;
    f.config["model_kind"] = "baseline";
    f.config["baseline"] = kind_name();
    f.put_text("vocab", vocab.serialize());
    if (const auto* nb = std::get_if<NaiveBayesModel>(&model)) {
        f.config["alpha"] = util::format_double(nb->alpha);
        f.put("nb.log_prior", {2}, {nb->log_prior[0], nb->log_prior[1]});
        std::vector<double> ll = nb->log_likelihood[0];
        ll.insert(ll.end(), nb->log_likelihood[1].begin(), nb->log_likelihood[1].end());
        f.put("nb.log_likelihood", {2, nb->dimension()}, std::move(ll));
    } else {
        const auto& lin = std::get<LinearModel>(model);
        f.put("linear.weights", {lin.weights.size()}, lin.weights);
        f.put("linear.bias", {1}, {lin.bias});
    }
    return f;
}

BaselinePipeline BaselinePipeline::from_arrays(const ArrayFile& file)
{
    if (file.config_value_or("model_kind", "") != "baseline") {
        throw ValidationError("checkpoint is not a baseline model");
    }
    BaselinePipeline p;
    p.vocab = Vocabulary::deserialize(file.get_text("vocab"));
    const auto& kind = file.config_value("baseline");
    if (kind == "nb") {
        NaiveBayesModel nb;
        nb.alpha = util::parse_double(file.config_value("alpha"));
        const auto& prior = file.get("nb.log_prior").values;
        const auto& ll = file.get("nb.log_likelihood");
        if (prior.size() != 2 || ll.shape.size() != 2 || ll.shape[0] != 2 ||
            ll.shape[1] != p.vocab.size()) {
            throw ValidationError("naive Bayes arrays do not match the vocabulary");
        }
        nb.log_prior = {prior[0], prior[1]};
        const auto dim = static_cast<std::ptrdiff_t>(ll.shape[1]);
        nb.log_likelihood[0].assign(ll.values.begin(), ll.values.begin() + dim);
        nb.log_likelihood[1].assign(ll.values.begin() + dim, ll.values.end());
        p.model = std::move(nb);
    } else if (kind == "logreg" || kind == "svm") {
        LinearModel lin;
        lin.kind = kind == "svm" ? LinearKind::Svm : LinearKind::LogReg;
        lin.weights = file.get("linear.weights").values;
        lin.bias = file.get("linear.bias").values.at(0);
        if (lin.weights.size() != p.vocab.size()) {
            throw ValidationError("linear weights do not match the vocabulary");
        }
        p.model = std::move(lin);
    } else {
        throw ValidationError("unknown baseline kind '" + kind + "'");
    }
    return p;
}

BaselineKind parse_baseline_kind(std::string_view name)
{
    if (name == "logreg") {
        return BaselineKind::LogReg;
    }
    if (name == "nb") {
        return BaselineKind::NaiveBayes;
    }
    if (name == "svm") {
        return BaselineKind::Svm;
    }
    throw ValidationError("unknown baseline kind '" + std::string(name) +
                          "' (expected logreg, nb or svm)");
}

BaselinePipeline train_baseline(BaselineKind kind, std::span<const std::string> texts,
                                std::span<const ClassLabel> labels, const BaselineOptions& options)
{
    BaselinePipeline p;
    p.vocab = Vocabulary::fit(texts);
    std::vector<SparseVector> rows;
    rows.reserve(texts.size());
    for (const auto& t : texts) {
        auto counts = p.vocab.count(t);
        rows.push_back(kind == BaselineKind::NaiveBayes ? std::move(counts)
                                                        : tfidf_transform(counts, p.vocab));
    }
    switch (kind) {
    case BaselineKind::LogReg:
        p.model = train_logreg(rows, labels, options.linear);
        break;
    case BaselineKind::Svm:
        p.model = train_svm(rows, labels, options.linear);
        break;
    case BaselineKind::NaiveBayes:
        p.model = train_nb(rows, labels, options.alpha);
        break;
    }
    return p;
}

} // namespace ti
