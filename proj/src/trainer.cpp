// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tweetinform/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "tweetinform/ensemble.hpp"
#include "tweetinform/error.hpp"
#include "tweetinform/metrics.hpp"
#include "util.hpp"

namespace ti {

namespace {

PredictionVector softmax2(std::span<const double> logits)
{
    const double top = std::max(logits[0], logits[1]);
    const double e0 = std::exp(logits[0] - top);
    const double e1 = std::exp(logits[1] - top);
    return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

std::vector<PredictionVector> predict_encoded(const TextClassifier& model,
                                              const std::vector<EncodedInput>& inputs)
{
    std::vector<PredictionVector> out(inputs.size());
    const auto n = static_cast<std::int64_t>(inputs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
        nn::NoGradGuard no_grad;
        const auto logits = model.logits(inputs[static_cast<std::size_t>(i)]);
        out[static_cast<std::size_t>(i)] = softmax2(logits.data());
    }
    return out;
}

std::vector<EncodedInput> prepare_all(const TextClassifier& model, const LabeledCorpus& corpus)
{
    std::vector<EncodedInput> out;
    out.reserve(corpus.size());
    for (const auto& r : corpus.records) {
        out.push_back(model.prepare(r.text));
    }
    return out;
}

double f1_of(const std::vector<PredictionVector>& preds, const std::vector<ClassLabel>& gold)
{
    std::vector<ClassLabel> labels;
    labels.reserve(preds.size());
    for (const auto& p : preds) {
        labels.push_back(classify(p));
    }
    return f1_informative(labels, gold).f1;
}

void set_encoders_trainable(TextClassifier& model, bool flag)
{
    for (const auto& prefix : model.encoder_prefixes()) {
        model.parameters().set_trainable(prefix, flag);
    }
}

} // namespace

TrainResult train_two_phase(TextClassifier& model, const LabeledCorpus& train,
                            const LabeledCorpus& valid, const TrainPlan& plan,
                            const TrainHooks& hooks)
{
    if (train.size() == 0 || valid.size() == 0) {
        throw ValidationError("training needs non-empty train and validation corpora");
    }
    if (plan.batch_size == 0 || plan.phase1.epochs < 1 || plan.phase2.epochs < 1 ||
        plan.phase1.lr0 <= 0 || plan.phase2.lr0 <= 0) {
        throw ValidationError("invalid train plan (batch_size >= 1, epochs >= 1, lr0 > 0)");
    }
    const auto train_labels = train.labels();
    const auto valid_labels = valid.labels();
    const auto train_inputs = prepare_all(model, train);
    const auto valid_inputs = prepare_all(model, valid);
    auto log = [&](const std::string& msg) {
        if (hooks.log) {
            hooks.log(msg);
        }
    };

    TrainResult result;
    bool have_best = false;
    bool stop = false;
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t steps_per_epoch = (train.size() + plan.batch_size - 1) / plan.batch_size;

    for (int phase = 1; phase <= 2 && !stop; ++phase) {
        const PhasePlan& pp = phase == 1 ? plan.phase1 : plan.phase2;
        set_encoders_trainable(model, phase == 2);
        nn::AdamW optimizer(plan.adamw);
        const std::size_t total_steps = steps_per_epoch * static_cast<std::size_t>(pp.epochs);
        std::size_t step = 0;
        for (int epoch = 1; epoch <= pp.epochs && !stop; ++epoch) {
            std::mt19937_64 shuffle_rng(nn::mix_seed(plan.seed, static_cast<std::uint64_t>(phase * 100000 + epoch)));
            std::shuffle(order.begin(), order.end(), shuffle_rng);
            double epoch_loss = 0.0;
            for (std::size_t start = 0; start < order.size(); start += plan.batch_size, ++step) {
                const std::size_t end = std::min(order.size(), start + plan.batch_size);
                const double inv_b = 1.0 / static_cast<double>(end - start);
                const std::uint64_t step_seed =
                    nn::mix_seed(plan.seed, (static_cast<std::uint64_t>(phase) << 40) + step);
                model.parameters().zero_grad();
                nn::Tensor loss;
                for (std::size_t b = start; b < end; ++b) {
                    const std::size_t idx = order[b];
                    ForwardContext ctx{true, nn::mix_seed(step_seed, b - start)};
                    const std::array<ClassLabel, 1> label{train_labels[idx]};
                    auto ce = nn::scale(nn::cross_entropy(model.logits(train_inputs[idx], ctx), label), inv_b);
                    loss = loss.defined() ? nn::add(loss, ce) : ce;
                }
                const double value = loss.item();
                if (!std::isfinite(value)) {
                    throw NumericError("non-finite loss in phase " + std::to_string(phase) +
                                       ", epoch " + std::to_string(epoch) + ", step " +
                                       std::to_string(step));
                }
                nn::backward(loss);
                optimizer.step(model.parameters(), nn::linear_decay(step, total_steps, pp.lr0));
                epoch_loss += value * static_cast<double>(end - start);
            }
            model.parameters().zero_grad();

            EpochRecord rec{phase, epoch, epoch_loss / static_cast<double>(train.size()),
                            f1_of(predict_encoded(model, valid_inputs), valid_labels)};
            result.history.push_back(rec);
            log("phase " + std::to_string(phase) + " epoch " + std::to_string(epoch) +
                " loss=" + util::format_double(rec.train_loss) +
                " valid_f1=" + util::format_double(rec.valid_f1));
            // strict improvement keeps the earlier epoch on ties
            if (!have_best || rec.valid_f1 > result.best.valid_f1) {
                have_best = true;
                result.best.file = model.to_arrays();
                result.best.valid_f1 = rec.valid_f1;
                result.best.phase = phase;
                result.best.epoch = epoch;
            }
            if (hooks.on_epoch && !hooks.on_epoch(rec, model)) {
                stop = true;
            }
        }
        if (phase == 1 && hooks.after_phase1) {
            hooks.after_phase1(model);
        }
    }
    set_encoders_trainable(model, true);

    model.load_parameters(result.best.file);
    result.best.file.config["valid_f1"] = util::format_double(result.best.valid_f1);
    result.best.file.config["phase"] = std::to_string(result.best.phase);
    result.best.file.config["epoch"] = std::to_string(result.best.epoch);
    return result;
}

std::vector<PredictionVector> predict(const TextClassifier& model, std::span<const std::string> tweets)
{
    std::vector<EncodedInput> inputs;
    inputs.reserve(tweets.size());
    for (const auto& t : tweets) {
        inputs.push_back(model.prepare(t));
    }
    return predict_encoded(model, inputs);
}

std::vector<PredictionVector> predict(const ArrayFile& checkpoint, std::span<const std::string> tweets,
                                      const MergeTable* tokenizer)
{
    auto model = load_model(checkpoint);
    if (tokenizer && tokenizer->fingerprint() != model->tokenizer().fingerprint()) {
        throw ValidationError("tokenizer does not match the one the checkpoint was trained with "
                              "(vocab mismatch)");
    }
    return predict(*model, tweets);
}

double accuracy(const TextClassifier& model, const LabeledCorpus& corpus)
{
    const auto gold = corpus.labels();
    const auto preds = predict(model, corpus.texts());
    std::size_t correct = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        correct += classify(preds[i]) == gold[i] ? 1 : 0;
    }
    return gold.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(gold.size());
}

} // namespace ti
