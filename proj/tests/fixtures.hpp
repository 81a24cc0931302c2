// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "tweetinform/corpus.hpp"

namespace ti::test {

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir()
    {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("tweetinform_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline TweetRecord record(std::string id, std::string text, ClassLabel label)
{
    return {std::move(id), std::move(text), label};
}

/// Separable toy tweets: informative ones mention cases, the rest do not.
inline LabeledCorpus synthetic_corpus(std::size_t n, std::uint64_t seed, std::size_t words = 6)
{
    static const std::vector<std::string> informative{"cases", "confirmed", "deaths",  "positive",
                                                      "tested", "hospital",  "outbreak", "reported"};
    static const std::vector<std::string> neutral{"love", "music", "stay", "happy",
                                                  "coffee", "sunny", "movie", "weekend"};
    static const std::vector<std::string> filler{"the", "in", "today", "city", "new", "we", "at", "and"};
    std::mt19937_64 rng(seed);
    LabeledCorpus corpus;
    for (std::size_t i = 0; i < n; ++i) {
        const bool info = i % 2 == 0;
        const auto& pool = info ? informative : neutral;
        std::string text;
        for (std::size_t w = 0; w < words; ++w) {
            const auto& src = w % 2 == 0 ? pool : filler;
            if (!text.empty()) {
                text += ' ';
            }
            text += src[rng() % src.size()];
        }
        text += ' ' + std::to_string(rng() % 1000);
        corpus.records.push_back(
            record("t" + std::to_string(i), text, info ? ClassLabel::Informative : ClassLabel::Uninformative));
    }
    return corpus;
}

} // namespace ti::test
