// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tweetinform/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "tweetinform/error.hpp"
#include "util.hpp"

namespace ti {

namespace {

constexpr std::string_view kHeaderLabeled = "Id\tText\tLabel";
constexpr std::string_view kHeaderUnlabeled = "Id\tText";

bool is_header(std::string_view line)
{
    auto lower = util::ascii_lower(line);
    return lower == util::ascii_lower(kHeaderLabeled) || lower == util::ascii_lower(kHeaderUnlabeled);
}

} // namespace

std::size_t LabeledCorpus::count(ClassLabel label) const noexcept
{
    return static_cast<std::size_t>(std::count_if(
        records.begin(), records.end(), [label](const TweetRecord& r) { return r.label == label; }));
}

std::vector<std::string> LabeledCorpus::texts() const
{
    std::vector<std::string> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        out.push_back(r.text);
    }
    return out;
}

std::vector<ClassLabel> LabeledCorpus::labels() const
{
    std::vector<ClassLabel> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        if (!r.label) {
            throw ValidationError("record '" + r.id + "' has no label");
        }
        out.push_back(*r.label);
    }
    return out;
}

void LabeledCorpus::validate() const
{
    std::unordered_set<std::string_view> seen;
    for (const auto& r : records) {
        if (util::trim(r.text).empty()) {
            throw ValidationError("record '" + r.id + "' has empty text");
        }
        if (!seen.insert(r.id).second) {
            throw ValidationError("duplicate id '" + r.id + "'");
        }
        if (split_tag != SplitTag::Test && !r.label) {
            throw ValidationError("record '" + r.id + "' is unlabeled in a labeled split");
        }
    }
}

LabeledCorpus parse_corpus(std::string_view content, const LoadOptions& options)
{
    LabeledCorpus corpus;
    corpus.split_tag = options.split_tag;
    const std::size_t arity = options.has_labels ? 3 : 2;
    std::unordered_set<std::string> ids;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < content.size()) {
        auto end = content.find('\n', pos);
        if (end == std::string_view::npos) {
            end = content.size();
        }
        std::string_view line = content.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line_no == 1) {
            const bool header = is_header(line);
            if (options.header == HeaderMode::Required && !header) {
                throw ParseError("expected header 'Id<TAB>Text<TAB>Label'", line_no);
            }
            if (header && options.header != HeaderMode::Absent) {
                continue;
            }
        }
        if (util::trim(line).empty()) {
            continue;
        }
        auto fields = util::split(line, '\t');
        if (fields.size() != arity) {
            throw ParseError("expected " + std::to_string(arity) + " tab-separated columns, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        TweetRecord record;
        record.id = std::string(util::trim(fields[0]));
        record.text = std::string(fields[1]);
        if (record.id.empty()) {
            throw ParseError("empty id", line_no);
        }
        if (util::trim(record.text).empty()) {
            throw ValidationError("line " + std::to_string(line_no) + ": empty text");
        }
        if (options.has_labels) {
            auto label = parse_label(util::trim(fields[2]));
            if (!label) {
                throw ValidationError("line " + std::to_string(line_no) + ": unknown label '" +
                                      std::string(fields[2]) + "'");
            }
            record.label = label;
        }
        if (!ids.insert(record.id).second) {
            throw ValidationError("line " + std::to_string(line_no) + ": duplicate id '" +
                                  record.id + "'");
        }
        corpus.records.push_back(std::move(record));
    }
    if (!options.has_labels && corpus.split_tag != SplitTag::Test) {
        corpus.split_tag = SplitTag::Test;
    }
    return corpus;
}

LabeledCorpus load_corpus(const std::filesystem::path& path, const LoadOptions& options)
{
    return parse_corpus(util::read_file(path), options);
}

std::string format_corpus(const LabeledCorpus& corpus)
{
    const bool labeled = std::all_of(corpus.records.begin(), corpus.records.end(),
                                     [](const TweetRecord& r) { return r.label.has_value(); });
    std::ostringstream out;
    out << (labeled ? kHeaderLabeled : kHeaderUnlabeled) << '\n';
    for (const auto& r : corpus.records) {
        if (r.text.find('\t') != std::string::npos || r.text.find('\n') != std::string::npos) {
            throw ValidationError("record '" + r.id + "' contains a tab or newline");
        }
        out << r.id << '\t' << r.text;
        if (labeled) {
            out << '\t' << label_name(*r.label);
        }
        out << '\n';
    }
    return out.str();
}

void save_corpus(const LabeledCorpus& corpus, const std::filesystem::path& path)
{
    util::write_file(path, format_corpus(corpus));
}

std::pair<LabeledCorpus, LabeledCorpus> resplit(const LabeledCorpus& train,
                                                const LabeledCorpus& validation,
                                                std::uint64_t seed)
{
    for (const auto* c : {&train, &validation}) {
        for (const auto& r : c->records) {
            if (!r.label) {
                throw ValidationError("resplit requires labeled corpora; '" + r.id + "' is unlabeled");
            }
        }
    }
    std::vector<TweetRecord> pool;
    pool.reserve(train.size() + validation.size());
    pool.insert(pool.end(), train.records.begin(), train.records.end());
    pool.insert(pool.end(), validation.records.begin(), validation.records.end());
    const std::size_t total = pool.size();
    if (total < 10) {
        throw ValidationError("resplit needs at least 10 records, got " + std::to_string(total));
    }

    std::mt19937_64 rng(seed);
    std::shuffle(pool.begin(), pool.end(), rng);

    // round(0.9 * total), half away from zero, in integer arithmetic
    const std::size_t n_train = (9 * total + 5) / 10;
    LabeledCorpus new_train{{pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_train)},
                            SplitTag::Train};
    LabeledCorpus new_valid{{pool.begin() + static_cast<std::ptrdiff_t>(n_train), pool.end()},
                            SplitTag::Validation};
    return {std::move(new_train), std::move(new_valid)};
}

std::size_t word_count(std::string_view text) noexcept
{
    std::size_t count = 0;
    bool in_word = false;
    for (char c : text) {
        const bool space = util::is_space(c);
        if (!space && !in_word) {
            ++count;
        }
        in_word = !space;
    }
    return count;
}

std::vector<std::string_view> split_words(std::string_view text)
{
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && util::is_space(text[i])) {
            ++i;
        }
        std::size_t j = i;
        while (j < text.size() && !util::is_space(text[j])) {
            ++j;
        }
        if (j > i) {
            words.push_back(text.substr(i, j - i));
        }
        i = j;
    }
    return words;
}

std::string_view bucket_name(LengthBucket bucket) noexcept
{
    switch (bucket) {
    case LengthBucket::Short:
        return "Short";
    case LengthBucket::Medium:
        return "Medium";
    case LengthBucket::Long:
        return "Long";
    }
    return "Short";
}

std::optional<LengthBucket> parse_bucket(std::string_view name) noexcept
{
    for (auto b : {LengthBucket::Short, LengthBucket::Medium, LengthBucket::Long}) {
        if (util::ascii_lower(name) == util::ascii_lower(bucket_name(b))) {
            return b;
        }
    }
    return std::nullopt;
}

} // namespace ti
