// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tweetinform/global_local.hpp"

#include <cmath>

#include "tweetinform/corpus.hpp"
#include "tweetinform/error.hpp"

namespace ti {

namespace {

std::string join_words(std::span<const std::string_view> words)
{
    std::string out;
    for (auto w : words) {
        if (!out.empty()) {
            out += ' ';
        }
        out += w;
    }
    return out;
}

// distinct dropout streams for the three encoders
constexpr std::uint64_t kGlobalStream = 1;
constexpr std::uint64_t kHeadStream = 2;
constexpr std::uint64_t kTailStream = 3;

ForwardContext substream(const ForwardContext& ctx, std::uint64_t stream)
{
    return {ctx.training, nn::mix_seed(ctx.dropout_seed, stream)};
}

} // namespace

std::pair<std::string, std::string> split_head_tail(std::string_view text, double ratio)
{
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw ValidationError("split ratio must lie in (0, 1)");
    }
    const auto words = split_words(text);
    const auto w = words.size();
    // exact integer ceil for the default midpoint
    const std::size_t cut = ratio == 0.5 ? (w + 1) / 2
                                         : static_cast<std::size_t>(std::ceil(static_cast<double>(w) * ratio));
    std::span<const std::string_view> all(words);
    return {join_words(all.subspan(0, cut)), join_words(all.subspan(cut))};
}

GlobalLocalModel::GlobalLocalModel(ModelSpec spec, MergeTable tokenizer)
    : TextClassifier(std::move(spec), std::move(tokenizer))
{
    if (spec_.kind != ModelKind::GlobalLocal) {
        throw ValidationError("GlobalLocalModel needs model_kind=global_local");
    }
    std::mt19937_64 rng(spec_.init_seed);
    global_ = std::make_unique<Encoder>(spec_.encoder, store_, "global.", rng);
    head_ = std::make_unique<Encoder>(spec_.encoder, store_, "head.", rng);
    tail_ = std::make_unique<Encoder>(spec_.encoder, store_, "tail.", rng);
    build_classifier(rng);
}

EncodedInput GlobalLocalModel::prepare(std::string_view text) const
{
    const auto [head, tail] = split_head_tail(text, spec_.global_local.split_ratio);
    const auto max_len = spec_.encoder.max_len;
    return {{tokenizer_.encode(text, max_len), tokenizer_.encode(head, max_len),
             tokenizer_.encode(tail, max_len)}};
}

nn::Tensor GlobalLocalModel::embed(const EncodedInput& input, const ForwardContext& ctx) const
{
    if (input.sequences.size() != 3) {
        throw ValidationError("global-local model expects three token sequences");
    }
    const auto& cfg = spec_.global_local;
    std::vector<nn::Tensor> parts{
        extract_pooled(global_->encode_prefix(input.sequences[0], substream(ctx, kGlobalStream)),
                       cfg.global_strategy),
        extract_pooled(head_->encode_prefix(input.sequences[1], substream(ctx, kHeadStream)),
                       cfg.head_strategy),
        extract_pooled(tail_->encode_prefix(input.sequences[2], substream(ctx, kTailStream)),
                       cfg.tail_strategy),
    };
    return nn::concat_cols(parts);
}

nn::Tensor global_local_embed(std::string_view text, const GlobalLocalModel& model,
                              const ForwardContext& ctx)
{
    return model.embed(model.prepare(text), ctx);
}

} // namespace ti
