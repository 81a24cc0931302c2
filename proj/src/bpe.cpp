// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tweetinform/bpe.hpp"

#include <algorithm>
#include <climits>
#include <cstdio>
#include <set>

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "tweetinform/corpus.hpp"
#include "tweetinform/error.hpp"
#include "util.hpp"

namespace ti {

namespace {

constexpr std::array<std::string_view, kNumSpecialTokens> kSpecialTokens{"[PAD]", "[CLS]", "[SEP]",
                                                                        "[UNK]"};

std::vector<std::string> initial_symbols(std::string_view word)
{
    auto chars = utf8_chars(word);
    if (!chars.empty()) {
        chars.back() += kEndOfWord;
    }
    return chars;
}

struct WordEntry {
    std::vector<std::string> symbols;
    long long freq = 0;
};

void merge_in_place(std::vector<std::string>& symbols, const SymbolPair& pair)
{
    std::vector<std::string> out;
    out.reserve(symbols.size());
    std::size_t i = 0;
    while (i < symbols.size()) {
        if (i + 1 < symbols.size() && symbols[i] == pair.first && symbols[i + 1] == pair.second) {
            out.push_back(symbols[i] + symbols[i + 1]);
            i += 2;
        } else {
            out.push_back(std::move(symbols[i]));
            ++i;
        }
    }
    symbols = std::move(out);
}

} // namespace

std::string normalize_text(std::string_view text)
{
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    std::string normalized;
    if (U_SUCCESS(status)) {
        auto ustr = icu::UnicodeString::fromUTF8(
            icu::StringPiece(text.data(), static_cast<std::int32_t>(text.size())));
        auto out = nfc->normalize(ustr, status);
        if (U_SUCCESS(status)) {
            out.toUTF8String(normalized);
        }
    }
    if (!U_SUCCESS(status)) {
        normalized.assign(text);
    }
    std::string collapsed;
    collapsed.reserve(normalized.size());
    for (auto w : split_words(normalized)) {
        if (!collapsed.empty()) {
            collapsed += ' ';
        }
        collapsed += w;
    }
    return collapsed;
}

std::vector<std::string> utf8_chars(std::string_view word)
{
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < word.size()) {
        const auto lead = static_cast<unsigned char>(word[i]);
        std::size_t len = 1;
        if (lead >= 0xF0 && lead < 0xF8) {
            len = 4;
        } else if (lead >= 0xE0) {
            len = lead < 0xF0 ? 3 : 1;
        } else if (lead >= 0xC0) {
            len = 2;
        }
        bool valid = i + len <= word.size();
        for (std::size_t k = 1; valid && k < len; ++k) {
            valid = (static_cast<unsigned char>(word[i + k]) & 0xC0) == 0x80;
        }
        if (!valid) {
            len = 1;
        }
        out.emplace_back(word.substr(i, len));
        i += len;
    }
    return out;
}

std::size_t TokenSequence::valid_length() const noexcept
{
    return static_cast<std::size_t>(std::count(attention_mask.begin(), attention_mask.end(), 1));
}

MergeTable MergeTable::train(std::span<const std::string> corpus, std::size_t vocab_size)
{
    if (corpus.empty()) {
        throw ValidationError("cannot train BPE on an empty corpus");
    }
    std::map<std::string, long long> word_freq;
    for (const auto& doc : corpus) {
        const auto norm = normalize_text(doc);
        for (auto w : split_words(norm)) {
            ++word_freq[std::string(w)];
        }
    }
    if (word_freq.empty()) {
        throw ValidationError("cannot train BPE: corpus has no words");
    }

    std::set<std::string> alphabet;
    std::vector<WordEntry> words;
    words.reserve(word_freq.size());
    for (const auto& [w, f] : word_freq) {
        for (const auto& c : utf8_chars(w)) {
            alphabet.insert(c);
            alphabet.insert(c + std::string(kEndOfWord));
        }
        words.push_back({initial_symbols(w), f});
    }

    MergeTable table;
    for (auto s : kSpecialTokens) {
        table.tokens_.emplace_back(s);
    }
    table.tokens_.insert(table.tokens_.end(), alphabet.begin(), alphabet.end());
    table.alphabet_size_ = alphabet.size();
    if (vocab_size < alphabet.size() + kNumSpecialTokens) {
        throw ValidationError("vocab_size " + std::to_string(vocab_size) +
                              " is smaller than the alphabet plus special tokens (" +
                              std::to_string(alphabet.size() + kNumSpecialTokens) + ")");
    }
    std::set<std::string> known(table.tokens_.begin(), table.tokens_.end());

    std::map<SymbolPair, long long> pair_counts;
    std::map<SymbolPair, std::set<std::size_t>> pair_words;
    auto add_word_pairs = [&](std::size_t wi, long long sign) {
        const auto& s = words[wi].symbols;
        for (std::size_t k = 0; k + 1 < s.size(); ++k) {
            SymbolPair p{s[k], s[k + 1]};
            auto& c = pair_counts[p];
            c += sign * words[wi].freq;
            if (sign > 0) {
                pair_words[p].insert(wi);
            } else if (c == 0) {
                pair_counts.erase(p);
            }
        }
    };
    for (std::size_t wi = 0; wi < words.size(); ++wi) {
        add_word_pairs(wi, +1);
    }

    while (known.size() < vocab_size) {
        // first maximum in lexicographic map order = smallest pair among ties
        auto best = pair_counts.end();
        for (auto it = pair_counts.begin(); it != pair_counts.end(); ++it) {
            if (best == pair_counts.end() || it->second > best->second) {
                best = it;
            }
        }
        if (best == pair_counts.end() || best->second < 2) {
            break;
        }
        const SymbolPair pair = best->first;
        const auto candidates = std::move(pair_words[pair]);
        pair_words.erase(pair);
        for (std::size_t wi : candidates) {
            add_word_pairs(wi, -1);
            merge_in_place(words[wi].symbols, pair);
            add_word_pairs(wi, +1);
        }
        table.merges_.push_back(pair);
        auto merged = pair.first + pair.second;
        if (known.insert(merged).second) {
            table.tokens_.push_back(std::move(merged));
        }
    }
    table.rebuild_indices();
    return table;
}

void MergeTable::rebuild_indices()
{
    token_ids_.clear();
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        if (!token_ids_.emplace(tokens_[i], static_cast<std::int32_t>(i)).second) {
            throw ValidationError("duplicate token '" + tokens_[i] + "' in vocabulary");
        }
    }
    merge_rank_.clear();
    for (std::size_t r = 0; r < merges_.size(); ++r) {
        merge_rank_.emplace(merges_[r], r);
    }
}

std::vector<std::string> MergeTable::segment_word(std::string_view word) const
{
    auto symbols = initial_symbols(word);
    while (symbols.size() > 1) {
        std::size_t best_rank = SIZE_MAX;
        std::size_t best_at = 0;
        for (std::size_t k = 0; k + 1 < symbols.size(); ++k) {
            auto it = merge_rank_.find({symbols[k], symbols[k + 1]});
            if (it != merge_rank_.end() && it->second < best_rank) {
                best_rank = it->second;
                best_at = k;
            }
        }
        if (best_rank == SIZE_MAX) {
            break;
        }
        const SymbolPair pair{symbols[best_at], symbols[best_at + 1]};
        merge_in_place(symbols, pair);
    }
    return symbols;
}

std::int32_t MergeTable::id_of(std::string_view token) const
{
    auto it = token_ids_.find(token);
    return it == token_ids_.end() ? kUnkId : it->second;
}

std::vector<std::int32_t> MergeTable::tokenize(std::string_view text) const
{
    std::vector<std::int32_t> ids;
    const auto norm = normalize_text(text);
    for (auto w : split_words(norm)) {
        for (const auto& s : segment_word(w)) {
            const auto id = id_of(s);
            // a literal "[CLS]" in the text must not become a framing token
            ids.push_back(id < static_cast<std::int32_t>(kNumSpecialTokens) ? kUnkId : id);
        }
    }
    return ids;
}

TokenSequence MergeTable::encode(std::string_view text, std::size_t max_len) const
{
    if (max_len < 3) {
        throw ValidationError("max_len must be at least 3");
    }
    auto body = tokenize(text);
    if (body.size() > max_len - 2) {
        body.resize(max_len - 2);
    }
    TokenSequence seq;
    seq.ids.reserve(max_len);
    seq.ids.push_back(kClsId);
    seq.ids.insert(seq.ids.end(), body.begin(), body.end());
    seq.ids.push_back(kSepId);
    seq.attention_mask.assign(seq.ids.size(), 1);
    seq.ids.resize(max_len, kPadId);
    seq.attention_mask.resize(max_len, 0);
    return seq;
}

std::string MergeTable::decode(std::span<const std::int32_t> ids) const
{
    std::string out;
    for (auto id : ids) {
        if (id == kPadId || id == kClsId || id == kSepId) {
            continue;
        }
        if (id == kUnkId || id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
            out += "[UNK]";
            continue;
        }
        std::string_view tok = tokens_[static_cast<std::size_t>(id)];
        if (tok.ends_with(kEndOfWord)) {
            out += tok.substr(0, tok.size() - kEndOfWord.size());
            out += ' ';
        } else {
            out += tok;
        }
    }
    if (!out.empty() && out.back() == ' ') {
        out.pop_back();
    }
    return out;
}

std::string MergeTable::serialize() const
{
    std::string out = "#version=1\n";
    out += "#alphabet=" + std::to_string(alphabet_size_) + "\n";
    for (const auto& [l, r] : merges_) {
        out += l + " " + r + "\n";
    }
    out += "#vocab\n";
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        out += tokens_[i] + "\t" + std::to_string(i) + "\n";
    }
    return out;
}

MergeTable MergeTable::deserialize(std::string_view text)
{
    auto lines = util::split(text, '\n');
    if (lines.empty() || lines[0] != "#version=1") {
        throw ParseError("expected '#version=1' header", 1);
    }
    MergeTable t;
    std::size_t ln = 1;
    if (ln < lines.size() && lines[ln].starts_with("#alphabet=")) {
        t.alphabet_size_ = static_cast<std::size_t>(util::parse_int(lines[ln].substr(10)));
        ++ln;
    }
    bool in_vocab = false;
    for (; ln < lines.size(); ++ln) {
        auto line = lines[ln];
        if (line.empty()) {
            continue;
        }
        if (!in_vocab) {
            if (line == "#vocab") {
                in_vocab = true;
                continue;
            }
            auto sp = line.find(' ');
            if (sp == std::string_view::npos || sp == 0 || sp + 1 == line.size()) {
                throw ParseError("expected 'left right' merge", ln + 1);
            }
            t.merges_.emplace_back(std::string(line.substr(0, sp)), std::string(line.substr(sp + 1)));
        } else {
            auto f = util::split(line, '\t');
            if (f.size() != 2) {
                throw ParseError("expected token<TAB>id", ln + 1);
            }
            if (util::parse_int(f[1]) != static_cast<long long>(t.tokens_.size())) {
                throw ParseError("token ids must be contiguous from 0", ln + 1);
            }
            t.tokens_.emplace_back(f[0]);
        }
    }
    if (!in_vocab) {
        throw ParseError("missing '#vocab' section", lines.size());
    }
    for (std::size_t i = 0; i < kNumSpecialTokens; ++i) {
        if (t.tokens_.size() <= i || t.tokens_[i] != kSpecialTokens[i]) {
            throw ValidationError("tokenizer vocabulary must start with [PAD] [CLS] [SEP] [UNK]");
        }
    }
    t.rebuild_indices();
    return t;
}

void MergeTable::save(const std::filesystem::path& path) const
{
    util::write_file(path, serialize());
}

MergeTable MergeTable::load(const std::filesystem::path& path)
{
    return deserialize(util::read_file(path));
}

std::string MergeTable::fingerprint() const
{
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(util::fnv1a(serialize())));
    return buf;
}

} // namespace ti
