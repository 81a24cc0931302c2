// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "tweetinform/bpe.hpp"
#include "tweetinform/error.hpp"

using namespace ti;

namespace {

// Textbook BPE: recount every pair from scratch after each merge.
std::vector<SymbolPair> naive_bpe(const std::vector<std::string>& corpus, std::size_t vocab_size)
{
    std::map<std::vector<std::string>, long long> words;
    std::set<std::string> tokens{"[PAD]", "[CLS]", "[SEP]", "[UNK]"};
    for (const auto& doc : corpus) {
        std::string word;
        auto flush = [&] {
            if (word.empty()) {
                return;
            }
            auto chars = utf8_chars(word);
            for (const auto& c : chars) {
                tokens.insert(c);
                tokens.insert(c + "</w>");
            }
            chars.back() += "</w>";
            ++words[chars];
            word.clear();
        };
        for (char ch : normalize_text(doc)) {
            if (ch == ' ') {
                flush();
            } else {
                word += ch;
            }
        }
        flush();
    }
    std::vector<SymbolPair> merges;
    while (tokens.size() < vocab_size) {
        std::map<SymbolPair, long long> counts;
        for (const auto& [symbols, freq] : words) {
            for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
                counts[{symbols[i], symbols[i + 1]}] += freq;
            }
        }
        const SymbolPair* best = nullptr;
        long long best_count = 0;
        for (const auto& [pair, count] : counts) {
            if (count > best_count) {
                best = &pair;
                best_count = count;
            }
        }
        if (!best || best_count < 2) {
            break;
        }
        const SymbolPair pair = *best;
        merges.push_back(pair);
        tokens.insert(pair.first + pair.second);
        std::map<std::vector<std::string>, long long> next;
        for (const auto& [symbols, freq] : words) {
            std::vector<std::string> out;
            for (std::size_t i = 0; i < symbols.size(); ++i) {
                if (i + 1 < symbols.size() && symbols[i] == pair.first && symbols[i + 1] == pair.second) {
                    out.push_back(pair.first + pair.second);
                    ++i;
                } else {
                    out.push_back(symbols[i]);
                }
            }
            next[out] += freq;
        }
        words = std::move(next);
    }
    return merges;
}

std::vector<std::string> random_corpus(std::mt19937_64& rng, std::size_t docs)
{
    const std::string letters = "abcab";
    std::vector<std::string> corpus;
    for (std::size_t d = 0; d < docs; ++d) {
        std::string doc;
        const auto n_words = 1 + rng() % 6;
        for (std::size_t w = 0; w < n_words; ++w) {
            const auto len = 1 + rng() % 6;
            for (std::size_t i = 0; i < len; ++i) {
                doc += letters[rng() % letters.size()];
            }
            doc += rng() % 4 ? " " : "  \t";
        }
        corpus.push_back(doc);
    }
    return corpus;
}

} // namespace

TEST_CASE("first merge of the classic low/lower corpus")
{
    const std::vector<std::string> corpus{"low low lower"};
    const auto t = MergeTable::train(corpus, 100);
    REQUIRE_FALSE(t.merges().empty());
    CHECK(t.merges()[0] == SymbolPair{"l", "o"});
    CHECK(t.merges() == naive_bpe(corpus, 100));
}

TEST_CASE("merges match the naive oracle")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const auto corpus = random_corpus(rng, 3 + rng() % 20);
        const std::size_t vocab = 10 + rng() % 40;
        const auto expected = naive_bpe(corpus, vocab);
        MergeTable t;
        try {
            t = MergeTable::train(corpus, vocab);
        } catch (const ValidationError&) {
            continue; // budget below alphabet size
        }
        CHECK(t.merges() == expected);
        CHECK(t.vocab_size() <= vocab);
    }
}

TEST_CASE("merge budget and determinism")
{
    const std::vector<std::string> corpus{"hello world", "hello there"};
    const auto base = MergeTable::train(corpus, 1000);
    const std::size_t alphabet = base.alphabet_size();
    const auto none = MergeTable::train(corpus, alphabet + kNumSpecialTokens);
    CHECK(none.merges().empty());
    CHECK(none.segment_word("hello") == std::vector<std::string>{"h", "e", "l", "l", "o</w>"});
    CHECK_THROWS_AS(MergeTable::train(corpus, alphabet + 3), ValidationError);
    CHECK(MergeTable::train(corpus, 1000) == base);
    CHECK_THROWS_AS(MergeTable::train({}, 100), ValidationError);
}

TEST_CASE("special token ids")
{
    const auto t = MergeTable::train(std::vector<std::string>{"a b"}, 50);
    CHECK(t.token(kPadId) == "[PAD]");
    CHECK(t.token(kClsId) == "[CLS]");
    CHECK(t.token(kSepId) == "[SEP]");
    CHECK(t.token(kUnkId) == "[UNK]");
}

TEST_CASE("empty text encodes to framing only")
{
    const auto t = MergeTable::train(std::vector<std::string>{"some text"}, 50);
    const auto s = t.encode("", 8);
    CHECK(s.ids == std::vector<std::int32_t>{1, 2, 0, 0, 0, 0, 0, 0});
    CHECK(s.attention_mask == std::vector<std::uint8_t>{1, 1, 0, 0, 0, 0, 0, 0});
    CHECK(s.valid_length() == 2);
    CHECK(t.encode("some").size() == kDefaultMaxLen);
    CHECK(kDefaultMaxLen == 256);
}

TEST_CASE("unknown symbols become UNK")
{
    const auto t = MergeTable::train(std::vector<std::string>{"abc abc"}, 50);
    const auto ids = t.tokenize("abz");
    CHECK(std::count(ids.begin(), ids.end(), kUnkId) == 1);
    // literal special-token text is not a special token
    for (auto id : t.tokenize("[CLS]")) {
        CHECK(id == kUnkId);
    }
}

TEST_CASE("encode invariants and reversibility")
{
    const auto corpus = test::synthetic_corpus(50, 8, 12);
    const auto texts = corpus.texts();
    const auto t = MergeTable::train(texts, 200);
    std::mt19937_64 rng(2);
    for (const auto& text : texts) {
        for (std::size_t max_len : {3u, 5u, 16u, 64u}) {
            const auto s = t.encode(text, max_len);
            REQUIRE(s.size() == max_len);
            REQUIRE(s.attention_mask.size() == max_len);
            CHECK(s.ids[0] == kClsId);
            const auto valid = s.valid_length();
            CHECK(s.ids[valid - 1] == kSepId);
            CHECK(std::count(s.ids.begin(), s.ids.end(), kSepId) == 1);
            for (std::size_t i = 0; i < max_len; ++i) {
                CHECK(s.attention_mask[i] == (i < valid ? 1 : 0));
                CHECK(static_cast<std::size_t>(s.ids[i]) < t.vocab_size());
                if (i >= valid) {
                    CHECK(s.ids[i] == kPadId);
                }
            }
        }
        const auto ids = t.tokenize(text);
        CHECK(t.decode(ids) == normalize_text(text));
        const auto framed = t.encode(text, ids.size() + 2);
        CHECK(t.decode(std::span(framed.ids).subspan(1, ids.size())) == normalize_text(text));
    }
}

TEST_CASE("truncation keeps the head")
{
    const auto t = MergeTable::train(std::vector<std::string>{"a b c d e f g"}, 30);
    const auto full = t.tokenize("a b c d e f g");
    const auto s = t.encode("a b c d e f g", 5);
    CHECK(std::vector<std::int32_t>(s.ids.begin() + 1, s.ids.begin() + 4) ==
          std::vector<std::int32_t>(full.begin(), full.begin() + 3));
    CHECK(s.ids[4] == kSepId);
}

TEST_CASE("normalization")
{
    CHECK(normalize_text("  a \t b\n\nc  ") == "a b c");
    // e + combining acute composes to U+00E9
    CHECK(normalize_text("cafe\xcc\x81") == "caf\xc3\xa9");
    const auto t = MergeTable::train(std::vector<std::string>{"caf\xc3\xa9 caf\xc3\xa9"}, 60);
    CHECK(t.tokenize("cafe\xcc\x81") == t.tokenize("caf\xc3\xa9"));
}

TEST_CASE("serialization round trip")
{
    const auto corpus = test::synthetic_corpus(30, 1, 10);
    const auto t = MergeTable::train(corpus.texts(), 150);
    const auto text = t.serialize();
    CHECK(text.rfind("#version=1\n", 0) == 0);
    const auto back = MergeTable::deserialize(text);
    CHECK(back == t);
    CHECK(back.fingerprint() == t.fingerprint());
    CHECK(back.alphabet_size() == t.alphabet_size());
    for (const auto& doc : corpus.texts()) {
        CHECK(back.encode(doc, 40) == t.encode(doc, 40));
    }
    test::TempDir dir;
    t.save(dir / "bpe.txt");
    CHECK(MergeTable::load(dir / "bpe.txt") == t);
    CHECK_THROWS_AS(MergeTable::deserialize("#version=2\n"), ParseError);

    const auto other = MergeTable::train(corpus.texts(), 140);
    CHECK(other.fingerprint() != t.fingerprint());
}
