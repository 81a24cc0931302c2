// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace ti {

/// Binary task label. The numeric values are the column indices of a
/// PredictionVector and of the classifier logits.
enum class ClassLabel : int {
    Uninformative = 0,
    Informative = 1,
};

inline constexpr std::array<ClassLabel, 2> kAllLabels{ClassLabel::Uninformative,
                                                      ClassLabel::Informative};

constexpr int label_index(ClassLabel label) noexcept { return static_cast<int>(label); }

constexpr std::string_view label_name(ClassLabel label) noexcept
{
    return label == ClassLabel::Informative ? "INFORMATIVE" : "UNINFORMATIVE";
}

constexpr std::optional<ClassLabel> parse_label(std::string_view text) noexcept
{
    if (text == "INFORMATIVE") {
        return ClassLabel::Informative;
    }
    if (text == "UNINFORMATIVE") {
        return ClassLabel::Uninformative;
    }
    return std::nullopt;
}

/// Softmax output of one model for one tweet: (p_uninformative, p_informative).
struct PredictionVector {
    double p_uninformative = 0.5;
    double p_informative = 0.5;

    constexpr double operator[](ClassLabel label) const noexcept
    {
        return label == ClassLabel::Informative ? p_informative : p_uninformative;
    }

    friend constexpr bool operator==(const PredictionVector&, const PredictionVector&) = default;
};

} // namespace ti
