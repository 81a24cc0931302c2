// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tweetinform/textfeat.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "tweetinform/error.hpp"
#include "util.hpp"

namespace ti {

namespace {

constexpr bool is_alnum(char c) noexcept
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

constexpr char lower(char c) noexcept
{
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

} // namespace

double SparseVector::dot(std::span<const double> dense) const
{
    if (dense.size() != dimension) {
        throw ShapeError("sparse dot: dimension " + std::to_string(dimension) + " vs dense " +
                         std::to_string(dense.size()));
    }
    double acc = 0.0;
    for (const auto& [i, v] : entries) {
        acc += v * dense[i];
    }
    return acc;
}

double SparseVector::norm() const noexcept
{
    double acc = 0.0;
    for (const auto& e : entries) {
        acc += e.second * e.second;
    }
    return std::sqrt(acc);
}

void SparseVector::check() const
{
    for (std::size_t k = 0; k < entries.size(); ++k) {
        if (entries[k].first >= dimension) {
            throw ValidationError("sparse index out of range");
        }
        if (k > 0 && entries[k].first <= entries[k - 1].first) {
            throw ValidationError("sparse indices not strictly increasing");
        }
        if (!std::isfinite(entries[k].second)) {
            throw ValidationError("sparse value not finite");
        }
    }
}

std::vector<std::string> baseline_tokens(std::string_view text)
{
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_alnum(text[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        std::string tok;
        while (j < text.size() && is_alnum(text[j])) {
            tok.push_back(lower(text[j]));
            ++j;
        }
        if (tok.size() >= 2) {
            out.push_back(std::move(tok));
        }
        i = j;
    }
    return out;
}

Vocabulary Vocabulary::fit(std::span<const std::string> documents)
{
    if (documents.empty()) {
        throw ValidationError("cannot fit a vocabulary on an empty corpus");
    }
    std::map<std::string, std::size_t, std::less<>> df;
    for (const auto& doc : documents) {
        auto toks = baseline_tokens(doc);
        std::set<std::string> unique(toks.begin(), toks.end());
        for (const auto& t : unique) {
            ++df[t];
        }
    }
    if (df.empty()) {
        throw ValidationError("corpus has no token of two or more alphanumeric characters");
    }
    Vocabulary v;
    v.n_documents_ = documents.size();
    for (auto& [term, count] : df) {
        v.index_.emplace(term, static_cast<std::uint32_t>(v.terms_.size()));
        v.terms_.push_back(term);
        v.df_.push_back(count);
    }
    return v;
}

std::int64_t Vocabulary::index_of(std::string_view term) const
{
    auto it = index_.find(term);
    return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

SparseVector Vocabulary::count(std::string_view text) const
{
    std::map<std::uint32_t, double> counts;
    for (const auto& tok : baseline_tokens(text)) {
        auto it = index_.find(tok);
        if (it != index_.end()) {
            counts[it->second] += 1.0;
        }
    }
    SparseVector out;
    out.dimension = size();
    out.entries.assign(counts.begin(), counts.end());
    return out;
}

double Vocabulary::idf(std::size_t index) const
{
    const double n = static_cast<double>(n_documents_);
    const double df = static_cast<double>(df_.at(index));
    return std::log((1.0 + n) / (1.0 + df)) + 1.0;
}

std::string Vocabulary::serialize() const
{
    std::ostringstream out;
    out << "#n_documents=" << n_documents_ << '\n';
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        out << terms_[i] << '\t' << i << '\t' << df_[i] << '\n';
    }
    return out.str();
}

Vocabulary Vocabulary::deserialize(std::string_view text)
{
    auto lines = util::split(text, '\n');
    if (lines.empty() || !lines[0].starts_with("#n_documents=")) {
        throw ParseError("missing '#n_documents=' header", 1);
    }
    Vocabulary v;
    v.n_documents_ = static_cast<std::size_t>(util::parse_int(lines[0].substr(13)));
    if (v.n_documents_ == 0) {
        throw ParseError("n_documents must be >= 1", 1);
    }
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) {
            continue;
        }
        auto f = util::split(lines[ln], '\t');
        if (f.size() != 3) {
            throw ParseError("expected term<TAB>index<TAB>df", ln + 1);
        }
        const auto idx = util::parse_int(f[1]);
        const auto df = util::parse_int(f[2]);
        if (idx != static_cast<long long>(v.terms_.size())) {
            throw ParseError("indices must be contiguous from 0", ln + 1);
        }
        if (df < 1 || static_cast<std::size_t>(df) > v.n_documents_) {
            throw ParseError("document frequency out of range", ln + 1);
        }
        std::string term(f[0]);
        if (!v.index_.emplace(term, static_cast<std::uint32_t>(idx)).second) {
            throw ParseError("duplicate term '" + term + "'", ln + 1);
        }
        v.terms_.push_back(std::move(term));
        v.df_.push_back(static_cast<std::size_t>(df));
    }
    return v;
}

void Vocabulary::save(const std::filesystem::path& path) const
{
    util::write_file(path, serialize());
}

Vocabulary Vocabulary::load(const std::filesystem::path& path)
{
    return deserialize(util::read_file(path));
}

SparseVector tfidf_transform(const SparseVector& counts, const Vocabulary& vocab)
{
    if (counts.dimension != vocab.size()) {
        throw ShapeError("tfidf_transform: count dimension " + std::to_string(counts.dimension) +
                         " != vocabulary size " + std::to_string(vocab.size()));
    }
    SparseVector out;
    out.dimension = counts.dimension;
    out.entries.reserve(counts.entries.size());
    for (const auto& [i, c] : counts.entries) {
        if (c != 0.0) {
            out.entries.emplace_back(i, c * vocab.idf(i));
        }
    }
    const double n = out.norm();
    if (n > 0.0) {
        for (auto& e : out.entries) {
            e.second /= n;
        }
    }
    return out;
}

} // namespace ti
