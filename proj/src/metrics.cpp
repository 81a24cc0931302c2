// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tweetinform/metrics.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "tweetinform/error.hpp"

namespace ti {

void ConfusionMatrix::add(ClassLabel predicted, ClassLabel gold) noexcept
{
    const bool pred_pos = predicted == ClassLabel::Informative;
    const bool gold_pos = gold == ClassLabel::Informative;
    if (pred_pos && gold_pos) {
        ++tp;
    } else if (pred_pos) {
        ++fp;
    } else if (gold_pos) {
        ++fn;
    } else {
        ++tn;
    }
}

namespace {

double ratio(std::size_t num, std::size_t den) noexcept
{
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

Metrics metrics_from_confusion(const ConfusionMatrix& cm) noexcept
{
    Metrics m;
    m.confusion = cm;
    m.precision = ratio(cm.tp, cm.tp + cm.fp);
    m.recall = ratio(cm.tp, cm.tp + cm.fn);
    const double denom = m.precision + m.recall;
    m.f1 = denom == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / denom;
    m.accuracy = ratio(cm.tp + cm.tn, cm.total());
    return m;
}

Metrics f1_informative(std::span<const ClassLabel> predicted, std::span<const ClassLabel> gold)
{
    if (predicted.size() != gold.size()) {
        throw ValidationError("prediction/gold length mismatch: " + std::to_string(predicted.size()) +
                              " vs " + std::to_string(gold.size()));
    }
    if (predicted.empty()) {
        throw ValidationError("cannot evaluate an empty prediction list");
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        cm.add(predicted[i], gold[i]);
    }
    return metrics_from_confusion(cm);
}

std::string Metrics::summary_line() const
{
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "f1=%.4f precision=%.4f recall=%.4f accuracy=%.4f tp=%zu fp=%zu fn=%zu tn=%zu",
                  f1, precision, recall, accuracy, confusion.tp, confusion.fp, confusion.fn,
                  confusion.tn);
    return buf;
}

std::string Metrics::to_json() const
{
    nlohmann::ordered_json j;
    j["f1_informative"] = f1;
    j["precision"] = precision;
    j["recall"] = recall;
    j["accuracy"] = accuracy;
    j["tp"] = confusion.tp;
    j["fp"] = confusion.fp;
    j["fn"] = confusion.fn;
    j["tn"] = confusion.tn;
    j["n"] = confusion.total();
    return j.dump();
}

} // namespace ti
