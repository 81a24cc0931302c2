// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tweetinform/bpe.hpp"
#include "tweetinform/checkpoint.hpp"
#include "tweetinform/encoder.hpp"
#include "tweetinform/optim.hpp"

namespace ti {

/// Stack of affine layers with GELU between them; the last layer emits the
/// two class logits.
class ClassificationBlock {
public:
    /// `depth` >= 1 affine layers; hidden layers are `hidden` wide (0 = in_dim).
    ClassificationBlock(std::size_t in_dim, std::size_t depth, std::size_t hidden,
                        nn::ParameterStore& store, const std::string& prefix, std::mt19937_64& rng);

    /// [1, in_dim] -> [1, 2]
    nn::Tensor forward(const nn::Tensor& embedding) const;

    std::size_t in_dim() const noexcept { return in_dim_; }
    std::size_t depth() const noexcept { return weights_.size(); }

private:
    std::size_t in_dim_;
    std::vector<nn::Tensor> weights_;
    std::vector<nn::Tensor> biases_;
};

enum class ModelKind { Single, GlobalLocal };

/// Strategies of the three global-local encoders plus where the tweet is cut
/// into head and tail (fraction of its words that go to the head, rounded up).
struct GlobalLocalConfig {
    ExtractionStrategy global_strategy;
    ExtractionStrategy head_strategy;
    ExtractionStrategy tail_strategy;
    double split_ratio = 0.5;

    std::size_t output_dim(const EncoderConfig& enc) const;
    void validate(std::size_t n_layers) const;

    friend bool operator==(const GlobalLocalConfig&, const GlobalLocalConfig&) = default;
};

/// The global-local configurations compared in the multi-encoder study.
std::vector<std::pair<std::string, GlobalLocalConfig>> standard_global_local_configs();

/// Architecture snapshot stored in every neural checkpoint.
struct ModelSpec {
    ModelKind kind = ModelKind::Single;
    EncoderConfig encoder;
    ExtractionStrategy strategy;     ///< single-encoder model
    GlobalLocalConfig global_local;  ///< global-local model
    std::size_t clf_depth = 2;
    std::size_t clf_hidden = 0;      ///< 0 = embedding dim
    std::uint64_t init_seed = 1;

    std::size_t embedding_dim() const;
    void validate() const;

    std::map<std::string, std::string> to_config() const;
    static ModelSpec from_config(const std::map<std::string, std::string>& config);
};

/// Tokenized model input: one sequence for a single encoder, three
/// (full, head, tail) for the global-local model.
struct EncodedInput {
    std::vector<TokenSequence> sequences;
};

/// Encoder(s) + classification block sharing one ParameterStore.
class TextClassifier {
public:
    virtual ~TextClassifier() = default;
    TextClassifier(const TextClassifier&) = delete;
    TextClassifier& operator=(const TextClassifier&) = delete;

    virtual EncodedInput prepare(std::string_view text) const = 0;
    /// Pooled embedding, shape [1, spec().embedding_dim()].
    virtual nn::Tensor embed(const EncodedInput& input, const ForwardContext& ctx) const = 0;
    /// Parameter-name prefixes of the encoder groups (frozen in phase 1).
    virtual std::vector<std::string> encoder_prefixes() const = 0;

    /// [1, 2] class logits.
    nn::Tensor logits(const EncodedInput& input, const ForwardContext& ctx = {}) const;

    nn::ParameterStore& parameters() noexcept { return store_; }
    const nn::ParameterStore& parameters() const noexcept { return store_; }
    const ModelSpec& spec() const noexcept { return spec_; }
    const MergeTable& tokenizer() const noexcept { return tokenizer_; }

    /// Parameters, architecture config and the embedded tokenizer.
    ArrayFile to_arrays() const;
    /// Overwrites parameters from a checkpoint produced by to_arrays().
    void load_parameters(const ArrayFile& file);

protected:
    TextClassifier(ModelSpec spec, MergeTable tokenizer);
    /// Creates the classification block; call after all encoders exist.
    void build_classifier(std::mt19937_64& rng);

    ModelSpec spec_;
    MergeTable tokenizer_;
    nn::ParameterStore store_;
    std::unique_ptr<ClassificationBlock> clf_;
};

/// One encoder, one extraction strategy; parameters under `encoder.` and `clf.`.
class SingleEncoderModel final : public TextClassifier {
public:
    SingleEncoderModel(ModelSpec spec, MergeTable tokenizer);

    EncodedInput prepare(std::string_view text) const override;
    nn::Tensor embed(const EncodedInput& input, const ForwardContext& ctx) const override;
    std::vector<std::string> encoder_prefixes() const override { return {"encoder."}; }

    const Encoder& encoder() const noexcept { return *encoder_; }

private:
    std::unique_ptr<Encoder> encoder_;
};

/// Freshly initialized model of the requested kind. The tokenizer vocabulary
/// size overrides spec.encoder.vocab_size.
std::unique_ptr<TextClassifier> make_model(ModelSpec spec, MergeTable tokenizer);

/// Rebuilds a model from a checkpoint (architecture, tokenizer, parameters).
std::unique_ptr<TextClassifier> load_model(const ArrayFile& file);

} // namespace ti
