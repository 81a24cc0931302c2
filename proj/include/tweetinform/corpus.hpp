// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tweetinform/labels.hpp"

namespace ti {

struct TweetRecord {
    std::string id;
    std::string text;
    std::optional<ClassLabel> label;

    friend bool operator==(const TweetRecord&, const TweetRecord&) = default;
};

enum class SplitTag { Train, Validation, Test };

struct LabeledCorpus {
    std::vector<TweetRecord> records;
    SplitTag split_tag = SplitTag::Train;

    std::size_t size() const noexcept { return records.size(); }
    std::size_t count(ClassLabel label) const noexcept;
    std::vector<std::string> texts() const;
    /// Gold labels in record order. Throws ValidationError if any record is unlabeled.
    std::vector<ClassLabel> labels() const;

    /// Checks non-empty texts, unique ids, and labels on train/validation splits.
    void validate() const;
};

enum class HeaderMode {
    Auto,     ///< skip the first line iff it is the official header
    Required, ///< first line must be the header
    Absent,   ///< every line is a record
};

struct LoadOptions {
    bool has_labels = true;
    HeaderMode header = HeaderMode::Auto;
    SplitTag split_tag = SplitTag::Train;
};

/// Reads a tab-separated `Id<TAB>Text[<TAB>Label]` file. Line numbers in
/// ParseError are physical 1-based file lines.
LabeledCorpus load_corpus(const std::filesystem::path& path, const LoadOptions& options = {});
LabeledCorpus parse_corpus(std::string_view content, const LoadOptions& options = {});

/// Writes the official header followed by one line per record. Labels are
/// written only when every record carries one.
void save_corpus(const LabeledCorpus& corpus, const std::filesystem::path& path);
std::string format_corpus(const LabeledCorpus& corpus);

/// Concatenates train then validation, shuffles with `seed`, and re-splits
/// 90/10 with the train side getting round(0.9 * total) records.
std::pair<LabeledCorpus, LabeledCorpus> resplit(const LabeledCorpus& train,
                                                const LabeledCorpus& validation,
                                                std::uint64_t seed);

/// Number of maximal runs of non-whitespace in the raw text.
std::size_t word_count(std::string_view text) noexcept;

/// Whitespace tokens of the raw text.
std::vector<std::string_view> split_words(std::string_view text);

enum class LengthBucket : int { Short = 0, Medium = 1, Long = 2 };

inline constexpr std::size_t kShortMaxWords = 22;
inline constexpr std::size_t kMediumMaxWords = 44;

constexpr LengthBucket bucket_of(std::size_t count) noexcept
{
    if (count <= kShortMaxWords) {
        return LengthBucket::Short;
    }
    if (count <= kMediumMaxWords) {
        return LengthBucket::Medium;
    }
    return LengthBucket::Long;
}

std::string_view bucket_name(LengthBucket bucket) noexcept;
std::optional<LengthBucket> parse_bucket(std::string_view name) noexcept;

} // namespace ti
