// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tweetinform/model.hpp"

#include "tweetinform/error.hpp"
#include "tweetinform/global_local.hpp"
#include "util.hpp"

namespace ti {

namespace {

constexpr double kClfInitStd = 0.02;

const std::string& require_key(const std::map<std::string, std::string>& c, const std::string& key)
{
    auto it = c.find(key);
    if (it == c.end()) {
        throw ValidationError("model config is missing '" + key + "'");
    }
    return it->second;
}

} // namespace

ClassificationBlock::ClassificationBlock(std::size_t in_dim, std::size_t depth, std::size_t hidden,
                                         nn::ParameterStore& store, const std::string& prefix,
                                         std::mt19937_64& rng)
    : in_dim_(in_dim)
{
    if (depth < 1) {
        throw ValidationError("classification block needs at least one layer");
    }
    const std::size_t width = hidden == 0 ? in_dim : hidden;
    std::size_t fan_in = in_dim;
    for (std::size_t l = 0; l < depth; ++l) {
        const std::size_t fan_out = l + 1 == depth ? 2 : width;
        const std::string p = prefix + "fc" + std::to_string(l + 1) + ".";
        weights_.push_back(store.add_normal(p + "w", {fan_in, fan_out}, kClfInitStd, rng));
        biases_.push_back(store.add_constant(p + "b", {fan_out}, 0.0));
        fan_in = fan_out;
    }
}

nn::Tensor ClassificationBlock::forward(const nn::Tensor& embedding) const
{
    if (embedding.cols() != in_dim_) {
        throw ShapeError("classification block expects width " + std::to_string(in_dim_) +
                         ", got " + nn::shape_string(embedding.shape()));
    }
    nn::Tensor x = embedding;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        if (l > 0) {
            x = nn::gelu(x);
        }
        x = nn::add_row(nn::matmul(x, weights_[l]), biases_[l]);
    }
    return x;
}

// ---------------------------------------------------------------------------

std::size_t GlobalLocalConfig::output_dim(const EncoderConfig& enc) const
{
    return global_strategy.output_dim(enc.n_layers, enc.d_model) +
           head_strategy.output_dim(enc.n_layers, enc.d_model) +
           tail_strategy.output_dim(enc.n_layers, enc.d_model);
}

void GlobalLocalConfig::validate(std::size_t n_layers) const
{
    global_strategy.validate(n_layers);
    head_strategy.validate(n_layers);
    tail_strategy.validate(n_layers);
    if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
        throw ValidationError("split_ratio must lie in (0, 1)");
    }
}

std::vector<std::pair<std::string, GlobalLocalConfig>> standard_global_local_configs()
{
    using S = ExtractionStrategy;
    using T = LayerTerm;
    auto cfg = [](S g, S h, S t) { return GlobalLocalConfig{std::move(g), std::move(h), std::move(t), 0.5}; };
    return {
        {"last / last / last", cfg(S::last_layer(), S::last_layer(), S::last_layer())},
        {"last 4 (concat) / last / last", cfg(S::concat_last(4), S::last_layer(), S::last_layer())},
        {"last 4 (concat) / last + first (concat) / first",
         cfg(S::concat_last(4), S::concat_set({T::last(), T::first()}), S::concat_set({T::first()}))},
        {"last 4 (average) / last + first (concat) / first",
         cfg(S::average_set({T::last(4)}), S::concat_set({T::last(), T::first()}),
             S::concat_set({T::first()}))},
        {"last 2 + first 2 (concat) / last + first 2 (concat) / last + first 2 (concat)",
         cfg(S::concat_set({T::last(2), T::first(2)}), S::concat_set({T::last(), T::first(2)}),
             S::concat_set({T::last(), T::first(2)}))},
    };
}

std::size_t ModelSpec::embedding_dim() const
{
    return kind == ModelKind::Single ? strategy.output_dim(encoder.n_layers, encoder.d_model)
                                     : global_local.output_dim(encoder);
}

void ModelSpec::validate() const
{
    encoder.validate();
    if (kind == ModelKind::Single) {
        strategy.validate(encoder.n_layers);
    } else {
        global_local.validate(encoder.n_layers);
    }
    if (clf_depth < 1) {
        throw ValidationError("clf_depth must be >= 1");
    }
}

std::map<std::string, std::string> ModelSpec::to_config() const
{
    std::map<std::string, std::string> c;
    c["model_kind"] = kind == ModelKind::Single ? "single" : "global_local";
    encoder.write(c, "encoder.");
    if (kind == ModelKind::Single) {
        c["strategy"] = strategy.to_string();
    } else {
        c["global_strategy"] = global_local.global_strategy.to_string();
        c["head_strategy"] = global_local.head_strategy.to_string();
        c["tail_strategy"] = global_local.tail_strategy.to_string();
        c["split_ratio"] = util::format_double(global_local.split_ratio);
    }
    c["clf_depth"] = std::to_string(clf_depth);
    c["clf_hidden"] = std::to_string(clf_hidden);
    c["init_seed"] = std::to_string(init_seed);
    return c;
}

ModelSpec ModelSpec::from_config(const std::map<std::string, std::string>& c)
{
    ModelSpec s;
    const auto& kind = require_key(c, "model_kind");
    if (kind == "single") {
        s.kind = ModelKind::Single;
        s.strategy = ExtractionStrategy::parse(require_key(c, "strategy"));
    } else if (kind == "global_local") {
        s.kind = ModelKind::GlobalLocal;
        s.global_local.global_strategy = ExtractionStrategy::parse(require_key(c, "global_strategy"));
        s.global_local.head_strategy = ExtractionStrategy::parse(require_key(c, "head_strategy"));
        s.global_local.tail_strategy = ExtractionStrategy::parse(require_key(c, "tail_strategy"));
        s.global_local.split_ratio = util::parse_double(require_key(c, "split_ratio"));
    } else {
        throw ValidationError("unknown model_kind '" + kind + "'");
    }
    s.encoder = EncoderConfig::read(c, "encoder.");
    s.clf_depth = static_cast<std::size_t>(util::parse_int(require_key(c, "clf_depth")));
    s.clf_hidden = static_cast<std::size_t>(util::parse_int(require_key(c, "clf_hidden")));
    s.init_seed = static_cast<std::uint64_t>(util::parse_int(require_key(c, "init_seed")));
    s.validate();
    return s;
}

// ---------------------------------------------------------------------------

TextClassifier::TextClassifier(ModelSpec spec, MergeTable tokenizer)
    : spec_(std::move(spec)), tokenizer_(std::move(tokenizer))
{
    spec_.encoder.vocab_size = tokenizer_.vocab_size();
    spec_.validate();
}

void TextClassifier::build_classifier(std::mt19937_64& rng)
{
    clf_ = std::make_unique<ClassificationBlock>(spec_.embedding_dim(), spec_.clf_depth,
                                                 spec_.clf_hidden, store_, "clf.", rng);
}

nn::Tensor TextClassifier::logits(const EncodedInput& input, const ForwardContext& ctx) const
{
    return clf_->forward(embed(input, ctx));
}

ArrayFile TextClassifier::to_arrays() const
{
    ArrayFile f;
    f.config = spec_.to_config();
    f.config["tokenizer_fingerprint"] = tokenizer_.fingerprint();
    f.put_text("tokenizer", tokenizer_.serialize());
    store_.export_to(f);
    return f;
}

void TextClassifier::load_parameters(const ArrayFile& file)
{
    store_.import_from(file);
}

SingleEncoderModel::SingleEncoderModel(ModelSpec spec, MergeTable tokenizer)
    : TextClassifier(std::move(spec), std::move(tokenizer))
{
    if (spec_.kind != ModelKind::Single) {
        throw ValidationError("SingleEncoderModel needs model_kind=single");
    }
    std::mt19937_64 rng(spec_.init_seed);
    encoder_ = std::make_unique<Encoder>(spec_.encoder, store_, "encoder.", rng);
    build_classifier(rng);
}

EncodedInput SingleEncoderModel::prepare(std::string_view text) const
{
    return {{tokenizer_.encode(text, spec_.encoder.max_len)}};
}

nn::Tensor SingleEncoderModel::embed(const EncodedInput& input, const ForwardContext& ctx) const
{
    if (input.sequences.size() != 1) {
        throw ValidationError("single-encoder model expects one token sequence");
    }
    return extract_pooled(encoder_->encode_prefix(input.sequences[0], ctx), spec_.strategy);
}

std::unique_ptr<TextClassifier> make_model(ModelSpec spec, MergeTable tokenizer)
{
    if (spec.kind == ModelKind::GlobalLocal) {
        return std::make_unique<GlobalLocalModel>(std::move(spec), std::move(tokenizer));
    }
    return std::make_unique<SingleEncoderModel>(std::move(spec), std::move(tokenizer));
}

std::unique_ptr<TextClassifier> load_model(const ArrayFile& file)
{
    const auto kind = file.config_value_or("model_kind", "");
    if (kind != "single" && kind != "global_local") {
        throw ValidationError("checkpoint does not hold a neural model (model_kind='" + kind + "')");
    }
    auto tokenizer = MergeTable::deserialize(file.get_text("tokenizer"));
    if (tokenizer.fingerprint() != file.config_value("tokenizer_fingerprint")) {
        throw ValidationError("embedded tokenizer does not match its recorded fingerprint");
    }
    auto model = make_model(ModelSpec::from_config(file.config), std::move(tokenizer));
    model->load_parameters(file);
    return model;
}

} // namespace ti
