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
#include <utility>
#include <vector>

namespace ti {

/// Sparse row with strictly increasing indices.
struct SparseVector {
    std::vector<std::pair<std::uint32_t, double>> entries;
    std::size_t dimension = 0;

    double dot(std::span<const double> dense) const;
    double norm() const noexcept;
    /// Throws ValidationError if indices are unsorted, out of range, or values non-finite.
    void check() const;

    friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

/// Lowercased ASCII alphanumeric runs of length >= 2.
std::vector<std::string> baseline_tokens(std::string_view text);

class Vocabulary {
public:
    Vocabulary() = default;

    /// Terms are indexed in lexicographic order; df counts each document once.
    /// Throws ValidationError on an empty corpus or one with no usable token.
    static Vocabulary fit(std::span<const std::string> documents);

    std::size_t size() const noexcept { return terms_.size(); }
    std::size_t n_documents() const noexcept { return n_documents_; }
    const std::vector<std::string>& terms() const noexcept { return terms_; }
    std::size_t document_frequency(std::size_t index) const { return df_.at(index); }
    /// Index of `term`, or -1 when it is out of vocabulary.
    std::int64_t index_of(std::string_view term) const;

    /// Raw term counts; out-of-vocabulary tokens are ignored.
    SparseVector count(std::string_view text) const;

    /// Smoothed idf: ln((1 + n) / (1 + df)) + 1.
    double idf(std::size_t index) const;

    /// `#n_documents=<n>` header then `term<TAB>index<TAB>df` lines.
    std::string serialize() const;
    static Vocabulary deserialize(std::string_view text);
    void save(const std::filesystem::path& path) const;
    static Vocabulary load(const std::filesystem::path& path);

    friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

private:
    std::vector<std::string> terms_;
    std::vector<std::size_t> df_;
    std::map<std::string, std::uint32_t, std::less<>> index_;
    std::size_t n_documents_ = 0;
};

/// count * idf, then L2-normalized. A zero vector stays zero.
SparseVector tfidf_transform(const SparseVector& counts, const Vocabulary& vocab);

} // namespace ti
