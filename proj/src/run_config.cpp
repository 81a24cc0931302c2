// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tweetinform/run_config.hpp"

#include <algorithm>
#include <set>

#include "tweetinform/error.hpp"
#include "util.hpp"

namespace ti {

namespace {

std::size_t as_size(const std::map<std::string, std::string>& v, const std::string& key)
{
    const auto n = util::parse_int(v.at(key));
    if (n < 0) {
        throw ValidationError("config key '" + key + "' must be >= 0");
    }
    return static_cast<std::size_t>(n);
}

double as_double(const std::map<std::string, std::string>& v, const std::string& key)
{
    return util::parse_double(v.at(key));
}

HeaderMode parse_header(const std::string& text)
{
    if (text == "auto") {
        return HeaderMode::Auto;
    }
    if (text == "required") {
        return HeaderMode::Required;
    }
    if (text == "absent") {
        return HeaderMode::Absent;
    }
    throw ValidationError("data.header must be auto, required or absent, got '" + text + "'");
}

void assign(std::map<std::string, std::string>& values, const std::string& key, std::string value,
            const std::string& where)
{
    const auto it = values.find(key);
    if (it == values.end()) {
        throw ValidationError(where + "unknown config key '" + key + "' (see `tweetinform train --help`)");
    }
    it->second = std::move(value);
}

RunConfig build(std::map<std::string, std::string> v)
{
    RunConfig rc;
    rc.seed = static_cast<std::uint64_t>(util::parse_int(v.at("seed")));

    std::map<std::string, std::string> spec;
    for (const char* k : {"model_kind", "strategy", "global_strategy", "head_strategy", "tail_strategy",
                          "split_ratio", "clf_depth", "clf_hidden"}) {
        spec[k] = v.at(k);
    }
    for (const auto& [k, val] : v) {
        if (k.rfind("encoder.", 0) == 0) {
            spec[k] = val;
        }
    }
    // replaced by the tokenizer's real size when the model is built
    spec["encoder.vocab_size"] = v.at("bpe.vocab_size");
    spec["init_seed"] = v.at("seed");
    rc.model = ModelSpec::from_config(spec);

    rc.plan.phase1 = {as_double(v, "phase1.lr"), static_cast<int>(as_size(v, "phase1.epochs"))};
    rc.plan.phase2 = {as_double(v, "phase2.lr"), static_cast<int>(as_size(v, "phase2.epochs"))};
    rc.plan.batch_size = as_size(v, "batch_size");
    rc.plan.seed = rc.seed;
    rc.plan.adamw = {as_double(v, "adamw.beta1"), as_double(v, "adamw.beta2"), as_double(v, "adamw.eps"),
                     as_double(v, "adamw.weight_decay")};
    if (rc.plan.phase1.epochs < 1 || rc.plan.phase2.epochs < 1 || rc.plan.phase1.lr0 <= 0 ||
        rc.plan.phase2.lr0 <= 0 || rc.plan.batch_size < 1) {
        throw ValidationError("phase epochs and batch_size must be >= 1 and learning rates > 0");
    }

    rc.bpe_vocab_size = as_size(v, "bpe.vocab_size");
    rc.bpe_path = v.at("bpe.path");
    rc.train_file = v.at("data.train");
    rc.valid_file = v.at("data.valid");
    rc.header = parse_header(v.at("data.header"));
    rc.values = std::move(v);
    return rc;
}

} // namespace

const std::vector<ConfigKey>& run_config_keys()
{
    static const std::vector<ConfigKey> keys{
        {"model_kind", "single", "single | global_local"},
        {"strategy", "last+first", "layer extraction of the single-encoder model"},
        {"global_strategy", "last4", "global encoder extraction (global_local)"},
        {"head_strategy", "last+first", "head encoder extraction (global_local)"},
        {"tail_strategy", "first", "tail encoder extraction (global_local)"},
        {"split_ratio", "0.5", "fraction of words routed to the head fragment"},
        {"encoder.n_layers", "4", "transformer layers"},
        {"encoder.d_model", "64", "hidden size"},
        {"encoder.n_heads", "4", "attention heads"},
        {"encoder.ffn_dim", "256", "feed-forward width"},
        {"encoder.max_len", "256", "padded sequence length"},
        {"encoder.dropout", "0.1", "hidden-state dropout"},
        {"clf_depth", "2", "affine layers in the classification block"},
        {"clf_hidden", "0", "hidden width of the classification block (0 = embedding dim)"},
        {"phase1.lr", "5e-4", "initial learning rate, classifier-only phase"},
        {"phase1.epochs", "12", "epochs of the classifier-only phase"},
        {"phase2.lr", "4e-5", "initial learning rate, full fine-tuning phase"},
        {"phase2.epochs", "6", "epochs of the full fine-tuning phase"},
        {"batch_size", "16", "examples per optimizer step"},
        {"adamw.beta1", "0.9", ""},
        {"adamw.beta2", "0.999", ""},
        {"adamw.eps", "1e-8", ""},
        {"adamw.weight_decay", "0.01", "decoupled weight decay"},
        {"seed", "1", "initialization, shuffling and dropout seed"},
        {"bpe.vocab_size", "4000", "tokenizer size when training one"},
        {"bpe.path", "", "existing tokenizer file; empty trains one on the training split"},
        {"data.train", "train.tsv", "training file inside --data-dir"},
        {"data.valid", "valid.tsv", "validation file inside --data-dir"},
        {"data.header", "auto", "auto | required | absent"},
    };
    return keys;
}

std::pair<std::string, std::string> split_assignment(std::string_view text)
{
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
        throw ValidationError("expected key=value, got '" + std::string(text) + "'");
    }
    return {std::string(util::trim(text.substr(0, eq))), std::string(util::trim(text.substr(eq + 1)))};
}

RunConfig parse_run_config(std::string_view text, const ConfigOverrides& overrides)
{
    std::map<std::string, std::string> values;
    for (const auto& k : run_config_keys()) {
        values[k.key] = k.default_value;
    }
    std::set<std::string> seen;
    std::size_t line_no = 0;
    for (auto raw : util::split(text, '\n')) {
        ++line_no;
        const auto line = util::trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (line.find('=') == std::string_view::npos) {
            throw ParseError("expected 'key = value'", line_no);
        }
        auto [key, value] = split_assignment(line);
        if (!seen.insert(key).second) {
            throw ParseError("key '" + key + "' given twice", line_no);
        }
        assign(values, key, std::move(value), "line " + std::to_string(line_no) + ": ");
    }
    for (const auto& [key, value] : overrides) {
        assign(values, key, value, "override: ");
    }
    return build(std::move(values));
}

RunConfig load_run_config(const std::filesystem::path& path, const ConfigOverrides& overrides)
{
    return parse_run_config(util::read_file(path), overrides);
}

std::string run_config_help()
{
    std::size_t width = 0;
    for (const auto& k : run_config_keys()) {
        width = std::max(width, k.key.size() + k.default_value.size() + 3);
    }
    std::string out = "Config keys (key = value, '#' comments):\n";
    for (const auto& k : run_config_keys()) {
        std::string lhs = "  " + k.key + " = " + k.default_value;
        lhs.resize(std::max(lhs.size(), width + 4), ' ');
        out += lhs + k.help + "\n";
    }
    return out;
}

} // namespace ti
