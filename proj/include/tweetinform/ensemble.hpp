// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tweetinform/corpus.hpp"
#include "tweetinform/labels.hpp"

namespace ti {

inline constexpr double kProbabilityTolerance = 1e-6;

/// Throws ValidationError unless both components are in [0, 1] and sum to 1
/// within kProbabilityTolerance.
void validate_prediction(const PredictionVector& p);

/// Argmax of a prediction vector; an exact tie goes to INFORMATIVE.
ClassLabel classify(const PredictionVector& p);

enum class EnsembleRule { MajorityVote, Average };

std::string_view rule_name(EnsembleRule rule) noexcept;
EnsembleRule parse_rule(std::string_view text);

/// Hard-vote ensemble. Even-N ties fall back to average_softmax.
ClassLabel majority_vote(std::span<const PredictionVector> preds);
/// Argmax of the mean prediction vector; ties go to INFORMATIVE.
ClassLabel average_softmax(std::span<const PredictionVector> preds);
ClassLabel combine(std::span<const PredictionVector> preds, EnsembleRule rule);

/// Per-tweet predictions of one model over a fixed list of tweets.
struct ModelPredictions {
    std::string id;
    std::vector<PredictionVector> predictions;
};

using BucketMap = std::map<LengthBucket, std::vector<std::string>>;

struct EnsembleSpec {
    std::vector<std::string> model_ids;
    EnsembleRule rule = EnsembleRule::MajorityVote;
    std::optional<BucketMap> bucket_map;

    void validate() const;
};

/// For every length bucket, the k models with the most correct predictions
/// on that bucket's tweets of `reference`. Ties prefer higher overall
/// accuracy, then the lexicographically smaller id. A bucket with no
/// reference tweets gets the overall top k.
BucketMap select_top_models_per_bucket(std::span<const ModelPredictions> models,
                                       const LabeledCorpus& reference, std::size_t k = 7);

/// Routes `tweet` by its word count and combines the predictions of that
/// bucket's models. `prediction_of` maps model id to its prediction for
/// this tweet.
ClassLabel bucketed_predict(std::string_view tweet, const BucketMap& bucket_map,
                            const std::map<std::string, PredictionVector>& prediction_of,
                            EnsembleRule rule = EnsembleRule::MajorityVote);

/// Whole-corpus ensembling. All models must cover `tweets` in the same
/// order. With a bucket map, only mapped models are consulted.
std::vector<ClassLabel> ensemble_predict(const EnsembleSpec& spec,
                                         std::span<const ModelPredictions> models,
                                         std::span<const std::string> tweets);

// Interchange files.

struct PredictionFile {
    std::vector<std::string> ids;
    std::vector<PredictionVector> predictions;
};

std::string format_predictions(std::span<const std::string> ids, std::span<const PredictionVector> preds);
PredictionFile parse_predictions(std::string_view text);
void save_predictions(const std::filesystem::path& path, std::span<const std::string> ids,
                      std::span<const PredictionVector> preds);
PredictionFile load_predictions(const std::filesystem::path& path);

std::string format_labels(std::span<const std::string> ids, std::span<const ClassLabel> labels);
/// Reads `id<TAB>LABEL` lines.
std::vector<std::pair<std::string, ClassLabel>> parse_labels(std::string_view text);

/// `Bucket<TAB>id,id,...` lines in bucket order.
std::string format_bucket_map(const BucketMap& map);
BucketMap parse_bucket_map(std::string_view text);

} // namespace ti
