// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tweetinform/bpe.hpp"
#include "tweetinform/corpus.hpp"
#include "tweetinform/model.hpp"
#include "tweetinform/trainer.hpp"

namespace ti {

/// One documented key of the `train` configuration.
struct ConfigKey {
    std::string key;
    std::string default_value;
    std::string help;
};

/// Every accepted key with its default, in display order.
const std::vector<ConfigKey>& run_config_keys();

/// Declarative settings of one `train` run.
///
/// The file format is one `key = value` per line; blank lines and lines
/// starting with `#` are ignored. Keys not listed in run_config_keys() are
/// rejected, as are repeated keys.
struct RunConfig {
    ModelSpec model;
    TrainPlan plan;
    std::size_t bpe_vocab_size = kDefaultBpeVocabSize;
    std::string bpe_path; ///< empty: train a tokenizer on the training split
    std::string train_file;
    std::string valid_file;
    HeaderMode header = HeaderMode::Auto;
    std::uint64_t seed = 1;

    /// Effective key/value view, including defaults.
    std::map<std::string, std::string> values;
};

using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

/// Defaults, then the document, then overrides (later wins).
RunConfig parse_run_config(std::string_view text, const ConfigOverrides& overrides = {});
RunConfig load_run_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

/// `key=value` into a pair; throws ValidationError without '='.
std::pair<std::string, std::string> split_assignment(std::string_view text);

/// Key table for --help.
std::string run_config_help();

} // namespace ti
