// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tweetinform/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "tweetinform/error.hpp"
#include "util.hpp"

namespace ti {

namespace {

constexpr std::array<LengthBucket, 3> kBuckets{LengthBucket::Short, LengthBucket::Medium, LengthBucket::Long};

void require_nonempty(std::span<const PredictionVector> preds, const char* what)
{
    if (preds.empty()) {
        throw ValidationError(std::string(what) + " needs at least one prediction");
    }
}

// argmax of the mean vector, which need not be normalized after rounding
ClassLabel classify_mean(double pu, double pi) noexcept
{
    return pu > pi ? ClassLabel::Uninformative : ClassLabel::Informative;
}

} // namespace

void validate_prediction(const PredictionVector& p)
{
    const auto in_range = [](double v) {
        return std::isfinite(v) && v >= -kProbabilityTolerance && v <= 1.0 + kProbabilityTolerance;
    };
    if (!in_range(p.p_uninformative) || !in_range(p.p_informative) ||
        std::abs(p.p_uninformative + p.p_informative - 1.0) > kProbabilityTolerance) {
        throw ValidationError("prediction vector (" + util::format_double(p.p_uninformative) + ", " +
                              util::format_double(p.p_informative) + ") is not a distribution");
    }
}

ClassLabel classify(const PredictionVector& p)
{
    validate_prediction(p);
    return p.p_uninformative > p.p_informative ? ClassLabel::Uninformative : ClassLabel::Informative;
}

std::string_view rule_name(EnsembleRule rule) noexcept
{
    return rule == EnsembleRule::MajorityVote ? "vote" : "average";
}

EnsembleRule parse_rule(std::string_view text)
{
    if (text == "vote" || text == "majority_vote") {
        return EnsembleRule::MajorityVote;
    }
    if (text == "average" || text == "avg") {
        return EnsembleRule::Average;
    }
    throw ValidationError("unknown ensemble rule '" + std::string(text) + "' (expected vote or average)");
}

ClassLabel majority_vote(std::span<const PredictionVector> preds)
{
    require_nonempty(preds, "majority_vote");
    std::size_t informative = 0;
    for (const auto& p : preds) {
        informative += classify(p) == ClassLabel::Informative ? 1 : 0;
    }
    const std::size_t uninformative = preds.size() - informative;
    if (informative == uninformative) {
        return average_softmax(preds);
    }
    return informative > uninformative ? ClassLabel::Informative : ClassLabel::Uninformative;
}

ClassLabel average_softmax(std::span<const PredictionVector> preds)
{
    require_nonempty(preds, "average_softmax");
    double su = 0.0;
    double si = 0.0;
    for (const auto& p : preds) {
        validate_prediction(p);
        su += p.p_uninformative;
        si += p.p_informative;
    }
    const auto n = static_cast<double>(preds.size());
    return classify_mean(su / n, si / n);
}

ClassLabel combine(std::span<const PredictionVector> preds, EnsembleRule rule)
{
    return rule == EnsembleRule::MajorityVote ? majority_vote(preds) : average_softmax(preds);
}

void EnsembleSpec::validate() const
{
    if (model_ids.empty()) {
        throw ValidationError("ensemble needs at least one model");
    }
    if (!bucket_map) {
        return;
    }
    const std::set<std::string> known(model_ids.begin(), model_ids.end());
    for (auto bucket : kBuckets) {
        const auto it = bucket_map->find(bucket);
        if (it == bucket_map->end() || it->second.empty()) {
            throw ValidationError("bucket map has no models for " + std::string(bucket_name(bucket)));
        }
        for (const auto& id : it->second) {
            if (!known.count(id)) {
                throw ValidationError("bucket map names unknown model '" + id + "'");
            }
        }
    }
}

BucketMap select_top_models_per_bucket(std::span<const ModelPredictions> models,
                                       const LabeledCorpus& reference, std::size_t k)
{
    if (k == 0) {
        throw ValidationError("k must be at least 1");
    }
    if (models.size() < k) {
        throw ValidationError("bucket selection needs at least " + std::to_string(k) + " models, got " +
                              std::to_string(models.size()));
    }
    const auto gold = reference.labels();
    std::vector<LengthBucket> bucket(reference.size());
    for (std::size_t t = 0; t < reference.size(); ++t) {
        bucket[t] = bucket_of(word_count(reference.records[t].text));
    }
    std::set<std::string> seen;
    // correct[m][b], with b == 3 the overall count
    std::vector<std::array<std::size_t, 4>> correct(models.size(), {0, 0, 0, 0});
    for (std::size_t m = 0; m < models.size(); ++m) {
        if (models[m].predictions.size() != reference.size()) {
            throw ShapeError("model '" + models[m].id + "' has " + std::to_string(models[m].predictions.size()) +
                             " predictions for " + std::to_string(reference.size()) + " reference tweets");
        }
        if (!seen.insert(models[m].id).second) {
            throw ValidationError("duplicate model id '" + models[m].id + "'");
        }
        for (std::size_t t = 0; t < gold.size(); ++t) {
            if (classify(models[m].predictions[t]) == gold[t]) {
                ++correct[m][static_cast<std::size_t>(bucket[t])];
                ++correct[m][3];
            }
        }
    }
    std::array<std::size_t, 3> bucket_sizes{0, 0, 0};
    for (auto b : bucket) {
        ++bucket_sizes[static_cast<std::size_t>(b)];
    }

    auto top_k = [&](std::size_t column) {
        std::vector<std::size_t> order(models.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (correct[a][column] != correct[b][column]) {
                return correct[a][column] > correct[b][column];
            }
            if (correct[a][3] != correct[b][3]) {
                return correct[a][3] > correct[b][3];
            }
            return models[a].id < models[b].id;
        });
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < k; ++i) {
            ids.push_back(models[order[i]].id);
        }
        return ids;
    };

    BucketMap out;
    for (auto b : kBuckets) {
        const auto column = static_cast<std::size_t>(b);
        out[b] = top_k(bucket_sizes[column] == 0 ? 3 : column);
    }
    return out;
}

ClassLabel bucketed_predict(std::string_view tweet, const BucketMap& bucket_map,
                            const std::map<std::string, PredictionVector>& prediction_of, EnsembleRule rule)
{
    const auto bucket = bucket_of(word_count(tweet));
    const auto it = bucket_map.find(bucket);
    if (it == bucket_map.end() || it->second.empty()) {
        throw ValidationError("bucket map has no models for " + std::string(bucket_name(bucket)));
    }
    std::vector<PredictionVector> preds;
    preds.reserve(it->second.size());
    for (const auto& id : it->second) {
        const auto p = prediction_of.find(id);
        if (p == prediction_of.end()) {
            throw ValidationError("no predictions for model '" + id + "'");
        }
        preds.push_back(p->second);
    }
    return combine(preds, rule);
}

std::vector<ClassLabel> ensemble_predict(const EnsembleSpec& spec, std::span<const ModelPredictions> models,
                                         std::span<const std::string> tweets)
{
    spec.validate();
    std::map<std::string, const ModelPredictions*> by_id;
    for (const auto& m : models) {
        if (m.predictions.size() != tweets.size()) {
            throw ShapeError("model '" + m.id + "' has " + std::to_string(m.predictions.size()) +
                             " predictions for " + std::to_string(tweets.size()) + " tweets");
        }
        by_id[m.id] = &m;
    }
    for (const auto& id : spec.model_ids) {
        if (!by_id.count(id)) {
            throw ValidationError("no predictions for model '" + id + "'");
        }
    }
    std::vector<ClassLabel> out(tweets.size());
    std::vector<PredictionVector> row;
    for (std::size_t t = 0; t < tweets.size(); ++t) {
        const std::vector<std::string>* ids = &spec.model_ids;
        if (spec.bucket_map) {
            ids = &spec.bucket_map->at(bucket_of(word_count(tweets[t])));
        }
        row.clear();
        for (const auto& id : *ids) {
            row.push_back(by_id.at(id)->predictions[t]);
        }
        out[t] = combine(row, spec.rule);
    }
    return out;
}

std::string format_predictions(std::span<const std::string> ids, std::span<const PredictionVector> preds)
{
    if (ids.size() != preds.size()) {
        throw ShapeError("ids and predictions differ in length");
    }
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out += ids[i];
        out += '\t';
        out += util::format_double(preds[i].p_uninformative);
        out += '\t';
        out += util::format_double(preds[i].p_informative);
        out += '\n';
    }
    return out;
}

PredictionFile parse_predictions(std::string_view text)
{
    PredictionFile out;
    std::size_t line_no = 0;
    for (const auto& raw : util::split(text, '\n')) {
        ++line_no;
        const auto line = util::trim(raw);
        if (line.empty()) {
            continue;
        }
        const auto fields = util::split(line, '\t');
        if (fields.size() != 3) {
            throw ParseError("expected id<TAB>p_uninformative<TAB>p_informative", line_no);
        }
        PredictionVector p;
        try {
            p = {util::parse_double(fields[1]), util::parse_double(fields[2])};
            validate_prediction(p);
        } catch (const Error& e) {
            throw ParseError(e.what(), line_no);
        }
        out.ids.emplace_back(fields[0]);
        out.predictions.push_back(p);
    }
    return out;
}

void save_predictions(const std::filesystem::path& path, std::span<const std::string> ids,
                      std::span<const PredictionVector> preds)
{
    util::write_file(path, format_predictions(ids, preds));
}

PredictionFile load_predictions(const std::filesystem::path& path)
{
    return parse_predictions(util::read_file(path));
}

std::string format_labels(std::span<const std::string> ids, std::span<const ClassLabel> labels)
{
    if (ids.size() != labels.size()) {
        throw ShapeError("ids and labels differ in length");
    }
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out += ids[i];
        out += '\t';
        out += label_name(labels[i]);
        out += '\n';
    }
    return out;
}

std::vector<std::pair<std::string, ClassLabel>> parse_labels(std::string_view text)
{
    std::vector<std::pair<std::string, ClassLabel>> out;
    std::size_t line_no = 0;
    for (const auto& raw : util::split(text, '\n')) {
        ++line_no;
        const auto line = util::trim(raw);
        if (line.empty()) {
            continue;
        }
        const auto fields = util::split(line, '\t');
        if (fields.size() != 2) {
            throw ParseError("expected id<TAB>LABEL", line_no);
        }
        const auto label = parse_label(fields[1]);
        if (!label) {
            throw ParseError("unknown label '" + std::string(fields[1]) + "'", line_no);
        }
        out.emplace_back(std::string(fields[0]), *label);
    }
    return out;
}

std::string format_bucket_map(const BucketMap& map)
{
    std::string out;
    for (const auto& [bucket, ids] : map) {
        out += bucket_name(bucket);
        out += '\t';
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (i) {
                out += ',';
            }
            out += ids[i];
        }
        out += '\n';
    }
    return out;
}

BucketMap parse_bucket_map(std::string_view text)
{
    BucketMap out;
    std::size_t line_no = 0;
    for (const auto& raw : util::split(text, '\n')) {
        ++line_no;
        const auto line = util::trim(raw);
        if (line.empty()) {
            continue;
        }
        const auto fields = util::split(line, '\t');
        const auto bucket = fields.size() == 2 ? parse_bucket(fields[0]) : std::nullopt;
        if (!bucket) {
            throw ParseError("expected Short|Medium|Long<TAB>id,id,...", line_no);
        }
        std::vector<std::string> ids;
        for (const auto& id : util::split(fields[1], ',')) {
            if (!id.empty()) {
                ids.emplace_back(id);
            }
        }
        out[*bucket] = std::move(ids);
    }
    return out;
}

} // namespace ti
