// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "tweetinform/labels.hpp"

namespace ti {

/// Binary confusion matrix with INFORMATIVE as the positive class.
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    std::size_t total() const noexcept { return tp + fp + fn + tn; }
    void add(ClassLabel predicted, ClassLabel gold) noexcept;

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct Metrics {
    ConfusionMatrix confusion;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;

    /// e.g. `f1=0.9045 precision=... recall=... accuracy=... tp=.. fp=.. fn=.. tn=..`
    std::string summary_line() const;
    /// Single-line JSON object with the same fields.
    std::string to_json() const;
};

/// Precision/recall/F1 from counts. An undefined ratio (0/0) counts as 0,
/// and F1 is 0 whenever precision + recall is 0.
Metrics metrics_from_confusion(const ConfusionMatrix& cm) noexcept;

/// Competition metric: F1 of the INFORMATIVE class plus the companions.
/// Throws ValidationError on length mismatch or empty input.
Metrics f1_informative(std::span<const ClassLabel> predicted, std::span<const ClassLabel> gold);

} // namespace ti
