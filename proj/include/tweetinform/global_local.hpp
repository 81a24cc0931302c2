// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "tweetinform/model.hpp"

namespace ti {

/// Cuts the whitespace words at ceil(w * ratio): the head gets the first part,
/// the tail the rest, each re-joined with single spaces.
std::pair<std::string, std::string> split_head_tail(std::string_view text, double ratio = 0.5);

/// Three encoders that never share parameters: `global.` reads the whole
/// tweet, `head.` and `tail.` read the two fragments. Their pooled outputs
/// are concatenated [global | head | tail] in front of one `clf.` block.
class GlobalLocalModel final : public TextClassifier {
public:
    GlobalLocalModel(ModelSpec spec, MergeTable tokenizer);

    EncodedInput prepare(std::string_view text) const override;
    nn::Tensor embed(const EncodedInput& input, const ForwardContext& ctx) const override;
    std::vector<std::string> encoder_prefixes() const override
    {
        return {"global.", "head.", "tail."};
    }

    const GlobalLocalConfig& config() const noexcept { return spec_.global_local; }

private:
    std::unique_ptr<Encoder> global_;
    std::unique_ptr<Encoder> head_;
    std::unique_ptr<Encoder> tail_;
};

/// Concatenated [global | head | tail] pooled embedding of `text`, shape [1, D].
nn::Tensor global_local_embed(std::string_view text, const GlobalLocalModel& model,
                              const ForwardContext& ctx = {});

} // namespace ti
