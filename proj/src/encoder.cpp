// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tweetinform/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tweetinform/error.hpp"
#include "util.hpp"

namespace ti {

namespace {

constexpr double kInitStd = 0.02;
constexpr double kLayerNormEps = 1e-12;

std::size_t read_size(const std::map<std::string, std::string>& in, const std::string& key)
{
    auto it = in.find(key);
    if (it == in.end()) {
        throw ValidationError("missing config key '" + key + "'");
    }
    const auto v = util::parse_int(it->second);
    if (v < 0) {
        throw ValidationError("config key '" + key + "' must be non-negative");
    }
    return static_cast<std::size_t>(v);
}

} // namespace

void EncoderConfig::validate() const
{
    if (n_layers < 1) {
        throw ValidationError("encoder needs at least one layer");
    }
    if (n_heads < 1 || d_model % n_heads != 0) {
        throw ValidationError("d_model (" + std::to_string(d_model) +
                              ") must be divisible by n_heads (" + std::to_string(n_heads) + ")");
    }
    if (max_len < 3) {
        throw ValidationError("max_len must be at least 3");
    }
    if (vocab_size <= kNumSpecialTokens || ffn_dim < 1) {
        throw ValidationError("vocab_size and ffn_dim must be positive");
    }
    if (dropout < 0.0 || dropout >= 1.0) {
        throw ValidationError("dropout must lie in [0, 1)");
    }
}

void EncoderConfig::write(std::map<std::string, std::string>& out, const std::string& prefix) const
{
    out[prefix + "n_layers"] = std::to_string(n_layers);
    out[prefix + "d_model"] = std::to_string(d_model);
    out[prefix + "n_heads"] = std::to_string(n_heads);
    out[prefix + "ffn_dim"] = std::to_string(ffn_dim);
    out[prefix + "max_len"] = std::to_string(max_len);
    out[prefix + "vocab_size"] = std::to_string(vocab_size);
    out[prefix + "dropout"] = util::format_double(dropout);
}

EncoderConfig EncoderConfig::read(const std::map<std::string, std::string>& in,
                                  const std::string& prefix)
{
    EncoderConfig c;
    c.n_layers = read_size(in, prefix + "n_layers");
    c.d_model = read_size(in, prefix + "d_model");
    c.n_heads = read_size(in, prefix + "n_heads");
    c.ffn_dim = read_size(in, prefix + "ffn_dim");
    c.max_len = read_size(in, prefix + "max_len");
    c.vocab_size = read_size(in, prefix + "vocab_size");
    auto it = in.find(prefix + "dropout");
    if (it == in.end()) {
        throw ValidationError("missing config key '" + prefix + "dropout'");
    }
    c.dropout = util::parse_double(it->second);
    c.validate();
    return c;
}

// ---------------------------------------------------------------------------

std::vector<long> LayerTerm::expand(std::size_t n_layers) const
{
    const auto L = static_cast<long>(n_layers);
    const auto k = static_cast<long>(count);
    std::vector<long> out;
    switch (anchor) {
    case Anchor::Absolute:
        out.push_back(k);
        break;
    case Anchor::First:
        for (long i = 1; i <= std::min(k, L); ++i) {
            out.push_back(i);
        }
        break;
    case Anchor::Mid: {
        const long mid = (L + 1) / 2;
        for (long i = mid; i <= std::min(mid + k - 1, L); ++i) {
            out.push_back(i);
        }
        break;
    }
    case Anchor::Last:
        for (long i = std::max(1L, L - k + 1); i <= L; ++i) {
            out.push_back(i);
        }
        break;
    }
    return out;
}

std::string LayerTerm::to_string() const
{
    if (anchor == Anchor::Absolute) {
        return std::to_string(count);
    }
    std::string base = anchor == Anchor::First ? "first" : anchor == Anchor::Mid ? "mid" : "last";
    return count == 1 ? base : base + std::to_string(count);
}

ExtractionStrategy ExtractionStrategy::last_layer()
{
    return {};
}

ExtractionStrategy ExtractionStrategy::concat_all()
{
    ExtractionStrategy s;
    s.kind_ = Kind::ConcatAll;
    return s;
}

ExtractionStrategy ExtractionStrategy::concat_last(std::size_t k)
{
    if (k == 0) {
        throw ValidationError("concat_last needs k >= 1");
    }
    ExtractionStrategy s;
    s.kind_ = Kind::ConcatLast;
    s.k_ = k;
    return s;
}

ExtractionStrategy ExtractionStrategy::concat_set(std::vector<LayerTerm> layers)
{
    if (layers.empty()) {
        throw ValidationError("concat_set needs at least one layer");
    }
    ExtractionStrategy s;
    s.kind_ = Kind::ConcatSet;
    s.terms_ = std::move(layers);
    return s;
}

ExtractionStrategy ExtractionStrategy::average_set(std::vector<LayerTerm> layers)
{
    if (layers.empty()) {
        throw ValidationError("average_set needs at least one layer");
    }
    ExtractionStrategy s;
    s.kind_ = Kind::AverageSet;
    s.terms_ = std::move(layers);
    return s;
}

ExtractionStrategy ExtractionStrategy::parse(std::string_view text)
{
    const std::string original(text);
    text = util::trim(text);
    bool average = false;
    if (text.ends_with(":avg")) {
        average = true;
        text.remove_suffix(4);
    }
    if (!average && text == "all") {
        return concat_all();
    }
    std::vector<LayerTerm> terms;
    for (auto raw : util::split(text, '+')) {
        auto term = util::trim(raw);
        LayerTerm t;
        std::string_view digits;
        if (term.starts_with("last")) {
            t.anchor = LayerTerm::Anchor::Last;
            digits = term.substr(4);
        } else if (term.starts_with("first")) {
            t.anchor = LayerTerm::Anchor::First;
            digits = term.substr(5);
        } else if (term.starts_with("mid")) {
            t.anchor = LayerTerm::Anchor::Mid;
            digits = term.substr(3);
        } else {
            t.anchor = LayerTerm::Anchor::Absolute;
            digits = term;
            if (digits.empty()) {
                throw ValidationError("empty layer term in strategy '" + original + "'");
            }
        }
        if (!digits.empty()) {
            long long v = 0;
            try {
                v = util::parse_int(digits);
            } catch (const ValidationError&) {
                throw ValidationError("bad layer term '" + std::string(term) + "' in strategy '" +
                                      original + "'");
            }
            if (v < 1) {
                throw ValidationError("layer term '" + std::string(term) + "' must be >= 1");
            }
            t.count = static_cast<std::size_t>(v);
        }
        terms.push_back(t);
    }
    if (average) {
        return average_set(std::move(terms));
    }
    if (terms.size() == 1 && terms[0].anchor == LayerTerm::Anchor::Last) {
        return terms[0].count == 1 ? last_layer() : concat_last(terms[0].count);
    }
    return concat_set(std::move(terms));
}

std::string ExtractionStrategy::to_string() const
{
    switch (kind_) {
    case Kind::LastLayer:
        return "last";
    case Kind::ConcatAll:
        return "all";
    case Kind::ConcatLast:
        return "last" + std::to_string(k_);
    case Kind::ConcatSet:
    case Kind::AverageSet: {
        std::string s;
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (i) {
                s += '+';
            }
            s += terms_[i].to_string();
        }
        return kind_ == Kind::AverageSet ? s + ":avg" : s;
    }
    }
    return "last";
}

std::vector<std::size_t> ExtractionStrategy::resolve(std::size_t n_layers) const
{
    std::vector<long> raw;
    switch (kind_) {
    case Kind::LastLayer:
        raw = LayerTerm::last(1).expand(n_layers);
        break;
    case Kind::ConcatAll:
        raw = LayerTerm::first(n_layers).expand(n_layers);
        break;
    case Kind::ConcatLast:
        raw = LayerTerm::last(k_).expand(n_layers);
        break;
    case Kind::ConcatSet:
    case Kind::AverageSet:
        for (const auto& t : terms_) {
            auto e = t.expand(n_layers);
            raw.insert(raw.end(), e.begin(), e.end());
        }
        break;
    }
    for (long idx : raw) {
        if (idx < 1 || idx > static_cast<long>(n_layers)) {
            throw ValidationError("strategy '" + to_string() + "' selects layer " +
                                  std::to_string(idx) + " outside [1, " +
                                  std::to_string(n_layers) + "]");
        }
    }
    std::vector<std::size_t> out(raw.begin(), raw.end());
    if (kind_ != Kind::AverageSet) {
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return out;
}

std::size_t ExtractionStrategy::output_dim(std::size_t n_layers, std::size_t d_model) const
{
    const auto layers = resolve(n_layers);
    return kind_ == Kind::AverageSet ? d_model : d_model * layers.size();
}

std::vector<std::pair<std::string, ExtractionStrategy>> standard_strategies()
{
    using T = LayerTerm;
    return {
        {"Last Layer", ExtractionStrategy::last_layer()},
        {"All Layers (concat)", ExtractionStrategy::concat_all()},
        {"Last 4 Layers (concat)", ExtractionStrategy::concat_last(4)},
        {"Last 2 Layers (concat)", ExtractionStrategy::concat_last(2)},
        {"Last 2 + First 2 (concat)", ExtractionStrategy::concat_set({T::last(2), T::first(2)})},
        {"Last + First (concat)", ExtractionStrategy::concat_set({T::last(), T::first()})},
        {"Last 2 + Mid 2 (concat)", ExtractionStrategy::concat_set({T::last(2), T::mid(2)})},
        {"Last + Mid (concat)", ExtractionStrategy::concat_set({T::last(), T::mid()})},
    };
}

nn::Tensor extract_pooled(const LayerStates& states, const ExtractionStrategy& strategy)
{
    const auto layers = strategy.resolve(states.n_layers());
    std::vector<nn::Tensor> rows;
    rows.reserve(layers.size());
    for (auto l : layers) {
        rows.push_back(nn::slice_rows(states.layers[l], 0, 1));
    }
    if (strategy.kind() == ExtractionStrategy::Kind::AverageSet) {
        return nn::mean_of(rows);
    }
    return rows.size() == 1 ? rows[0] : nn::concat_cols(rows);
}

// ---------------------------------------------------------------------------

Encoder::Encoder(const EncoderConfig& config, nn::ParameterStore& store, std::string prefix,
                 std::mt19937_64& rng)
    : config_(config), prefix_(std::move(prefix))
{
    config_.validate();
    const auto d = config_.d_model;
    const auto f = config_.ffn_dim;
    auto name = [this](const std::string& n) { return prefix_ + n; };
    tok_emb_ = store.add_normal(name("tok_emb"), {config_.vocab_size, d}, kInitStd, rng);
    pos_emb_ = store.add_normal(name("pos_emb"), {config_.max_len, d}, kInitStd, rng);
    emb_ln_g_ = store.add_constant(name("emb_ln.gamma"), {d}, 1.0);
    emb_ln_b_ = store.add_constant(name("emb_ln.beta"), {d}, 0.0);
    for (std::size_t l = 0; l < config_.n_layers; ++l) {
        const std::string p = "layer" + std::to_string(l + 1) + ".";
        Block b;
        b.wq = store.add_normal(name(p + "attn.wq"), {d, d}, kInitStd, rng);
        b.bq = store.add_constant(name(p + "attn.bq"), {d}, 0.0);
        b.wk = store.add_normal(name(p + "attn.wk"), {d, d}, kInitStd, rng);
        b.bk = store.add_constant(name(p + "attn.bk"), {d}, 0.0);
        b.wv = store.add_normal(name(p + "attn.wv"), {d, d}, kInitStd, rng);
        b.bv = store.add_constant(name(p + "attn.bv"), {d}, 0.0);
        b.wo = store.add_normal(name(p + "attn.wo"), {d, d}, kInitStd, rng);
        b.bo = store.add_constant(name(p + "attn.bo"), {d}, 0.0);
        b.ln1_g = store.add_constant(name(p + "ln1.gamma"), {d}, 1.0);
        b.ln1_b = store.add_constant(name(p + "ln1.beta"), {d}, 0.0);
        b.w1 = store.add_normal(name(p + "ffn.w1"), {d, f}, kInitStd, rng);
        b.b1 = store.add_constant(name(p + "ffn.b1"), {f}, 0.0);
        b.w2 = store.add_normal(name(p + "ffn.w2"), {f, d}, kInitStd, rng);
        b.b2 = store.add_constant(name(p + "ffn.b2"), {d}, 0.0);
        b.ln2_g = store.add_constant(name(p + "ln2.gamma"), {d}, 1.0);
        b.ln2_b = store.add_constant(name(p + "ln2.beta"), {d}, 0.0);
        blocks_.push_back(std::move(b));
    }
}

LayerStates Encoder::encode_sequence(const TokenSequence& tokens, const ForwardContext& ctx) const
{
    return run(tokens, tokens.size(), ctx);
}

LayerStates Encoder::encode_prefix(const TokenSequence& tokens, const ForwardContext& ctx) const
{
    return run(tokens, tokens.valid_length(), ctx);
}

nn::Tensor Encoder::attention(const Block& b, const nn::Tensor& x, std::size_t valid) const
{
    const auto d = config_.d_model;
    const auto heads = config_.n_heads;
    const auto dh = d / heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
    auto q = nn::add_row(nn::matmul(x, b.wq), b.bq);
    auto k = nn::add_row(nn::matmul(x, b.wk), b.bk);
    auto v = nn::add_row(nn::matmul(x, b.wv), b.bv);
    // keys beyond `valid` are padding and receive zero attention
    auto k_valid = nn::slice_rows(k, 0, valid);
    auto v_valid = nn::slice_rows(v, 0, valid);
    std::vector<nn::Tensor> ctx_heads;
    ctx_heads.reserve(heads);
    for (std::size_t h = 0; h < heads; ++h) {
        auto qh = nn::slice_cols(q, h * dh, dh);
        auto kh = nn::slice_cols(k_valid, h * dh, dh);
        auto vh = nn::slice_cols(v_valid, h * dh, dh);
        auto scores = nn::scale(nn::matmul_nt(qh, kh), scale);
        auto probs = nn::softmax(scores, 1);
        ctx_heads.push_back(nn::matmul(probs, vh));
    }
    auto merged = heads == 1 ? ctx_heads[0] : nn::concat_cols(ctx_heads);
    return nn::add_row(nn::matmul(merged, b.wo), b.bo);
}

LayerStates Encoder::run(const TokenSequence& tokens, std::size_t rows,
                         const ForwardContext& ctx) const
{
    if (tokens.ids.size() != config_.max_len || tokens.attention_mask.size() != config_.max_len) {
        throw ShapeError("encode_sequence: sequence length " + std::to_string(tokens.ids.size()) +
                         " != configured max_len " + std::to_string(config_.max_len));
    }
    const std::size_t valid = tokens.valid_length();
    for (std::size_t i = 0; i < tokens.attention_mask.size(); ++i) {
        if (tokens.attention_mask[i] != (i < valid ? 1 : 0)) {
            throw ValidationError("attention mask must be a run of 1s followed by 0s");
        }
    }
    if (valid == 0) {
        throw ValidationError("attention mask selects no position");
    }
    for (auto id : tokens.ids) {
        if (id < 0 || static_cast<std::size_t>(id) >= config_.vocab_size) {
            throw ValidationError("token id " + std::to_string(id) + " outside vocabulary of " +
                                  std::to_string(config_.vocab_size));
        }
    }
    const bool drop = ctx.training && config_.dropout > 0.0;
    std::uint64_t site = 0;
    auto maybe_dropout = [&](const nn::Tensor& t) {
        ++site;
        return drop ? nn::dropout(t, config_.dropout, nn::mix_seed(ctx.dropout_seed, site)) : t;
    };

    std::vector<std::int32_t> ids(tokens.ids.begin(), tokens.ids.begin() + static_cast<std::ptrdiff_t>(rows));
    std::vector<std::int32_t> positions(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        positions[i] = static_cast<std::int32_t>(i);
    }

    LayerStates states;
    states.attention_mask = tokens.attention_mask;
    auto x = nn::add(nn::embedding(tok_emb_, ids), nn::embedding(pos_emb_, positions));
    x = maybe_dropout(nn::layer_norm(x, emb_ln_g_, emb_ln_b_, kLayerNormEps));
    states.layers.push_back(x);
    for (const auto& b : blocks_) {
        auto a = maybe_dropout(attention(b, x, valid));
        x = nn::layer_norm(nn::add(x, a), b.ln1_g, b.ln1_b, kLayerNormEps);
        auto h = nn::gelu(nn::add_row(nn::matmul(x, b.w1), b.b1));
        auto f = maybe_dropout(nn::add_row(nn::matmul(h, b.w2), b.b2));
        x = nn::layer_norm(nn::add(x, f), b.ln2_g, b.ln2_b, kLayerNormEps);
        states.layers.push_back(x);
    }
    return states;
}

} // namespace ti
