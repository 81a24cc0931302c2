// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tweetinform/checkpoint.hpp"
#include "tweetinform/labels.hpp"
#include "tweetinform/textfeat.hpp"

namespace ti {

enum class LinearKind { LogReg, Svm };

struct LinearModel {
    LinearKind kind = LinearKind::LogReg;
    std::vector<double> weights;
    double bias = 0.0;

    double decision(const SparseVector& x) const;
};

struct LinearTrainOptions {
    double l2 = 1e-4;
    int epochs = 200;
    double lr = 0.5;
};

/// Objective value and gradient of mean loss + (l2 / 2) * ||w||^2. The bias
/// is not regularized.
struct LinearObjective {
    double loss = 0.0;
    std::vector<double> grad_weights;
    double grad_bias = 0.0;
};

/// Logistic loss log(1 + exp(-s * f)) with s = +1 for INFORMATIVE, -1 otherwise.
LinearObjective logreg_objective(const LinearModel& model, std::span<const SparseVector> x,
                                 std::span<const ClassLabel> y, double l2);
/// Hinge loss max(0, 1 - s * f); the subgradient at the kink is taken as 0.
LinearObjective svm_objective(const LinearModel& model, std::span<const SparseVector> x,
                              std::span<const ClassLabel> y, double l2);

/// Full-batch descent from zero weights. Each epoch takes a gradient step on
/// the data term and applies the L2 term as the proximal shrink
/// w <- w / (1 + lr * l2), which stays stable for arbitrarily large l2.
LinearModel train_logreg(std::span<const SparseVector> x, std::span<const ClassLabel> y,
                         const LinearTrainOptions& options = {});
LinearModel train_svm(std::span<const SparseVector> x, std::span<const ClassLabel> y,
                      const LinearTrainOptions& options = {});

/// Multinomial naive Bayes over raw counts with add-alpha smoothing.
struct NaiveBayesModel {
    std::array<double, 2> log_prior{};
    std::array<std::vector<double>, 2> log_likelihood;
    double alpha = 1.0;

    std::size_t dimension() const noexcept { return log_likelihood[0].size(); }
};

NaiveBayesModel train_nb(std::span<const SparseVector> counts, std::span<const ClassLabel> y,
                         double alpha = 1.0);

/// logreg: (1 - sigmoid(f), sigmoid(f)); SVM: one-hot from sign(f), f = 0 counts
/// as INFORMATIVE; NB: normalized posteriors.
PredictionVector predict_baseline(const LinearModel& model, const SparseVector& x);
PredictionVector predict_baseline(const NaiveBayesModel& model, const SparseVector& x);

/// Vocabulary plus one classifier; LogReg and SVM read tf-idf rows, NB reads raw counts.
struct BaselinePipeline {
    Vocabulary vocab;
    std::variant<LinearModel, NaiveBayesModel> model;

    std::string kind_name() const;
    PredictionVector predict(std::string_view text) const;

    ArrayFile to_arrays() const;
    static BaselinePipeline from_arrays(const ArrayFile& file);
};

enum class BaselineKind { LogReg, NaiveBayes, Svm };

BaselineKind parse_baseline_kind(std::string_view name);

struct BaselineOptions {
    LinearTrainOptions linear;
    double alpha = 1.0;
};

BaselinePipeline train_baseline(BaselineKind kind, std::span<const std::string> texts,
                                std::span<const ClassLabel> labels,
                                const BaselineOptions& options = {});

} // namespace ti
