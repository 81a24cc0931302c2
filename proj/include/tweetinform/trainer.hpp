// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tweetinform/checkpoint.hpp"
#include "tweetinform/corpus.hpp"
#include "tweetinform/labels.hpp"
#include "tweetinform/model.hpp"
#include "tweetinform/optim.hpp"

namespace ti {

struct PhasePlan {
    double lr0 = 5e-4;
    int epochs = 12;
};

/// Phase 1 trains only the classification block with the encoders frozen;
/// phase 2 fine-tunes everything. Each phase has its own AdamW state and its
/// own linear decay from lr0 to 0 over that phase's steps.
struct TrainPlan {
    PhasePlan phase1{5e-4, 12};
    PhasePlan phase2{4e-5, 6};
    std::size_t batch_size = 16;
    std::uint64_t seed = 1;
    nn::AdamWConfig adamw;
};

struct EpochRecord {
    int phase = 1;
    int epoch = 1; ///< 1-based within the phase
    double train_loss = 0.0;
    double valid_f1 = 0.0;
};

/// Snapshot of the best epoch: model arrays plus `valid_f1`, `phase` and
/// `epoch` entries in its config.
struct Checkpoint {
    ArrayFile file;
    double valid_f1 = 0.0;
    int phase = 0;
    int epoch = 0;
};

struct TrainHooks {
    /// Called after each epoch's validation; return false to stop training.
    std::function<bool(const EpochRecord&, TextClassifier&)> on_epoch;
    /// Called once between the two phases.
    std::function<void(TextClassifier&)> after_phase1;
    std::function<void(const std::string&)> log;
};

struct TrainResult {
    Checkpoint best;
    std::vector<EpochRecord> history;
};

/// Runs both phases, validating (F1 on INFORMATIVE) after every epoch and
/// keeping the earliest best epoch. The model is left holding the best
/// parameters. Throws NumericError on a non-finite loss, naming phase,
/// epoch and step.
TrainResult train_two_phase(TextClassifier& model, const LabeledCorpus& train,
                            const LabeledCorpus& valid, const TrainPlan& plan,
                            const TrainHooks& hooks = {});

/// Eval-mode softmax outputs in input order.
std::vector<PredictionVector> predict(const TextClassifier& model, std::span<const std::string> tweets);

/// Loads `checkpoint` and predicts. When `tokenizer` is given it must be the
/// one embedded in the checkpoint, else ValidationError.
std::vector<PredictionVector> predict(const ArrayFile& checkpoint, std::span<const std::string> tweets,
                                      const MergeTable* tokenizer = nullptr);

/// Training-set style accuracy of argmax predictions against gold labels.
double accuracy(const TextClassifier& model, const LabeledCorpus& corpus);

} // namespace ti
