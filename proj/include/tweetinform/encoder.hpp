// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tweetinform/bpe.hpp"
#include "tweetinform/optim.hpp"
#include "tweetinform/tensor.hpp"

namespace ti {

struct EncoderConfig {
    std::size_t n_layers = 4;
    std::size_t d_model = 64;
    std::size_t n_heads = 4;
    std::size_t ffn_dim = 256;
    std::size_t max_len = 64;
    std::size_t vocab_size = kDefaultBpeVocabSize;
    double dropout = 0.1;

    /// Throws ValidationError unless d_model % n_heads == 0, n_layers >= 1, max_len >= 3.
    void validate() const;

    void write(std::map<std::string, std::string>& out, const std::string& prefix) const;
    static EncoderConfig read(const std::map<std::string, std::string>& in, const std::string& prefix);

    friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

/// Train mode enables dropout, with masks keyed by `dropout_seed`.
struct ForwardContext {
    bool training = false;
    std::uint64_t dropout_seed = 0;
};

/// Hidden states of one forward pass: index 0 is the embedding output, index
/// l in 1..L is the output of transformer layer l. Each is [rows, d].
struct LayerStates {
    std::vector<nn::Tensor> layers;
    std::vector<std::uint8_t> attention_mask;

    std::size_t n_layers() const noexcept { return layers.empty() ? 0 : layers.size() - 1; }
};

/// A run of layers named relative to the encoder depth L:
/// `last(k)` = L-k+1..L, `first(k)` = 1..k, `mid(k)` = m..m+k-1 with
/// m = ceil(L / 2), and `at(i)` = layer i. Runs are clipped to [1, L], so
/// `last(4)` on a 2-layer encoder is layers 1..2; an `at(i)` outside [1, L]
/// is an error.
struct LayerTerm {
    enum class Anchor { First, Mid, Last, Absolute };
    Anchor anchor = Anchor::Last;
    std::size_t count = 1; ///< run length, or the layer index for Absolute

    static LayerTerm last(std::size_t k = 1) { return {Anchor::Last, k}; }
    static LayerTerm first(std::size_t k = 1) { return {Anchor::First, k}; }
    static LayerTerm mid(std::size_t k = 1) { return {Anchor::Mid, k}; }
    static LayerTerm at(std::size_t index) { return {Anchor::Absolute, index}; }

    /// Layer indices; only Absolute terms can fall outside [1, L].
    std::vector<long> expand(std::size_t n_layers) const;
    std::string to_string() const;

    friend bool operator==(const LayerTerm&, const LayerTerm&) = default;
};

/// Rule for building the pooled embedding from [CLS] rows of several layers.
///
/// Concat strategies deduplicate the selected layers and concatenate them
/// bottom-to-top, so their width is d * |distinct layers|. AverageSet keeps
/// its list as given (repeats allowed) and has width d.
///
/// Text form, as used in config files:
///   `last`, `all`, `last4`                 LastLayer, ConcatAll, ConcatLast(4)
///   `last+first`, `last2+mid2`, `first`    ConcatSet, terms joined by '+'
///   `last+3`                               a bare number is an absolute layer
///   `last4:avg`                            AverageSet over the same terms
class ExtractionStrategy {
public:
    enum class Kind { LastLayer, ConcatAll, ConcatLast, ConcatSet, AverageSet };

    static ExtractionStrategy last_layer();
    static ExtractionStrategy concat_all();
    static ExtractionStrategy concat_last(std::size_t k);
    static ExtractionStrategy concat_set(std::vector<LayerTerm> layers);
    static ExtractionStrategy average_set(std::vector<LayerTerm> layers);

    static ExtractionStrategy parse(std::string_view text);
    std::string to_string() const;

    Kind kind() const noexcept { return kind_; }

    /// Concrete 1-based layer indices for depth L; throws ValidationError if
    /// any index falls outside [1, L].
    std::vector<std::size_t> resolve(std::size_t n_layers) const;
    std::size_t output_dim(std::size_t n_layers, std::size_t d_model) const;
    void validate(std::size_t n_layers) const { (void)resolve(n_layers); }

    friend bool operator==(const ExtractionStrategy&, const ExtractionStrategy&) = default;

private:
    Kind kind_ = Kind::LastLayer;
    std::size_t k_ = 1;
    std::vector<LayerTerm> terms_;
};

/// The single-encoder strategies compared in the layer-extraction study,
/// with their display names.
std::vector<std::pair<std::string, ExtractionStrategy>> standard_strategies();

/// Position-0 ([CLS]) rows of the selected layers, concatenated or averaged.
/// Result has shape [1, output_dim].
nn::Tensor extract_pooled(const LayerStates& states, const ExtractionStrategy& strategy);

/// Post-LN transformer encoder (token + learned position embeddings, then L
/// blocks of multi-head self-attention and GELU feed-forward). Parameters
/// live in a shared ParameterStore under `prefix`.
class Encoder {
public:
    Encoder(const EncoderConfig& config, nn::ParameterStore& store, std::string prefix,
            std::mt19937_64& rng);

    /// Full forward: every position of the max_len sequence gets a row.
    /// Padding positions are excluded from attention keys.
    LayerStates encode_sequence(const TokenSequence& tokens, const ForwardContext& ctx = {}) const;

    /// Forward over the non-pad prefix only. The rows it returns equal the
    /// corresponding rows of encode_sequence, since no real position attends
    /// to padding.
    LayerStates encode_prefix(const TokenSequence& tokens, const ForwardContext& ctx = {}) const;

    const EncoderConfig& config() const noexcept { return config_; }
    const std::string& prefix() const noexcept { return prefix_; }

private:
    struct Block {
        nn::Tensor wq, bq, wk, bk, wv, bv, wo, bo;
        nn::Tensor ln1_g, ln1_b;
        nn::Tensor w1, b1, w2, b2;
        nn::Tensor ln2_g, ln2_b;
    };

    LayerStates run(const TokenSequence& tokens, std::size_t rows, const ForwardContext& ctx) const;
    nn::Tensor attention(const Block& block, const nn::Tensor& x, std::size_t valid) const;

    EncoderConfig config_;
    std::string prefix_;
    nn::Tensor tok_emb_;
    nn::Tensor pos_emb_;
    nn::Tensor emb_ln_g_;
    nn::Tensor emb_ln_b_;
    std::vector<Block> blocks_;
};

} // namespace ti
