// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ti {

inline constexpr std::int32_t kPadId = 0;
inline constexpr std::int32_t kClsId = 1;
inline constexpr std::int32_t kSepId = 2;
inline constexpr std::int32_t kUnkId = 3;
inline constexpr std::size_t kNumSpecialTokens = 4;
inline constexpr std::size_t kDefaultMaxLen = 256;
inline constexpr std::size_t kDefaultBpeVocabSize = 4000;

/// Suffix marking the last symbol of a word.
inline constexpr std::string_view kEndOfWord = "</w>";

/// Unicode NFC followed by collapsing whitespace runs to one space and trimming.
std::string normalize_text(std::string_view text);

/// Fixed-length, framed token ids: [CLS] tokens... [SEP] [PAD]...
struct TokenSequence {
    std::vector<std::int32_t> ids;
    std::vector<std::uint8_t> attention_mask;

    std::size_t size() const noexcept { return ids.size(); }
    /// Number of leading non-pad positions.
    std::size_t valid_length() const noexcept;

    friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

using SymbolPair = std::pair<std::string, std::string>;

/// Trained BPE merges plus the token vocabulary. Ids 0..3 are the special
/// tokens, then the base alphabet in lexicographic order (for every observed
/// character both its word-internal form `c` and word-final form `c</w>`),
/// then one id per new symbol in merge order.
class MergeTable {
public:
    MergeTable() = default;

    /// Greedy most-frequent-pair merging on whitespace-split, normalized words.
    /// Ties go to the lexicographically smallest pair. Stops at `vocab_size`
    /// tokens or when no pair occurs at least twice.
    static MergeTable train(std::span<const std::string> corpus, std::size_t vocab_size);

    /// Unframed token ids of the normalized text.
    std::vector<std::int32_t> tokenize(std::string_view text) const;
    /// Subword symbols of one word, merges applied in training order.
    std::vector<std::string> segment_word(std::string_view word) const;

    /// Frames as [CLS] ... [SEP], keeping the first max_len - 2 tokens, and pads to max_len.
    TokenSequence encode(std::string_view text, std::size_t max_len = kDefaultMaxLen) const;

    /// Inverse of tokenize for non-special ids.
    std::string decode(std::span<const std::int32_t> ids) const;

    std::size_t vocab_size() const noexcept { return tokens_.size(); }
    std::size_t alphabet_size() const noexcept { return alphabet_size_; }
    const std::vector<SymbolPair>& merges() const noexcept { return merges_; }
    const std::string& token(std::int32_t id) const { return tokens_.at(static_cast<std::size_t>(id)); }
    /// Id of `token` or kUnkId.
    std::int32_t id_of(std::string_view token) const;

    /// `#version=1`, one `left right` merge per line, `#vocab`, then `token<TAB>id`.
    std::string serialize() const;
    static MergeTable deserialize(std::string_view text);
    void save(const std::filesystem::path& path) const;
    static MergeTable load(const std::filesystem::path& path);

    /// Hash of the serialized form, used to pair checkpoints with tokenizers.
    std::string fingerprint() const;

    friend bool operator==(const MergeTable& a, const MergeTable& b)
    {
        return a.merges_ == b.merges_ && a.tokens_ == b.tokens_;
    }

private:
    void rebuild_indices();

    std::vector<SymbolPair> merges_;
    std::vector<std::string> tokens_;
    std::size_t alphabet_size_ = 0;
    std::map<std::string, std::int32_t, std::less<>> token_ids_;
    std::map<SymbolPair, std::size_t> merge_rank_;
};

/// Code points of a UTF-8 word as separate strings; invalid bytes stand alone.
std::vector<std::string> utf8_chars(std::string_view word);

} // namespace ti
