// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <nlohmann/json.hpp>
#include <random>

#include "tweetinform/error.hpp"
#include "tweetinform/metrics.hpp"

using namespace ti;

namespace {

constexpr auto I = ClassLabel::Informative;
constexpr auto U = ClassLabel::Uninformative;

void expand(const ConfusionMatrix& cm, std::vector<ClassLabel>& pred, std::vector<ClassLabel>& gold)
{
    auto push = [&](std::size_t n, ClassLabel p, ClassLabel g) {
        for (std::size_t i = 0; i < n; ++i) {
            pred.push_back(p);
            gold.push_back(g);
        }
    };
    push(cm.tp, I, I);
    push(cm.fp, I, U);
    push(cm.fn, U, I);
    push(cm.tn, U, U);
}

} // namespace

TEST_CASE("hand-computed F1")
{
    std::vector<ClassLabel> pred;
    std::vector<ClassLabel> gold;
    expand({8, 2, 2, 5}, pred, gold);
    const auto m = f1_informative(pred, gold);
    CHECK(m.precision == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(m.recall == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(m.f1 == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(m.confusion == ConfusionMatrix{8, 2, 2, 5});
    CHECK(m.accuracy == doctest::Approx(13.0 / 17.0));
}

TEST_CASE("degenerate predictors")
{
    const std::vector<ClassLabel> gold{I, U, I};
    CHECK(f1_informative(gold, gold).f1 == 1.0);
    const std::vector<ClassLabel> all_u{U, U, U};
    const auto m = f1_informative(all_u, gold);
    CHECK(m.f1 == 0.0);
    CHECK(m.precision == 0.0);
    CHECK(m.recall == 0.0);
    CHECK_THROWS_AS(f1_informative(all_u, std::vector<ClassLabel>{U}), ValidationError);
    CHECK_THROWS_AS(f1_informative({}, {}), ValidationError);
}

TEST_CASE("F1 bounds and permutation invariance")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 40;
        std::vector<ClassLabel> pred(n);
        std::vector<ClassLabel> gold(n);
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] = rng() % 2 ? I : U;
            gold[i] = rng() % 2 ? I : U;
        }
        const auto m = f1_informative(pred, gold);
        CHECK(m.f1 >= 0.0);
        CHECK(m.f1 <= 1.0);
        CHECK(m.confusion.total() == n);
        const bool perfect = m.confusion.fp == 0 && m.confusion.fn == 0 && m.confusion.tp > 0;
        CHECK((m.f1 == 1.0) == perfect);

        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<ClassLabel> p2;
        std::vector<ClassLabel> g2;
        for (auto i : order) {
            p2.push_back(pred[i]);
            g2.push_back(gold[i]);
        }
        const auto m2 = f1_informative(p2, g2);
        CHECK(m2.f1 == m.f1);
        CHECK(m2.confusion == m.confusion);
    }
}

TEST_CASE("report formats")
{
    const auto m = metrics_from_confusion({3, 1, 1, 5});
    const auto line = m.summary_line();
    CHECK(line.find("f1=") != std::string::npos);
    CHECK(line.find("tp=3") != std::string::npos);
    const auto j = nlohmann::json::parse(m.to_json());
    CHECK(j.at("tp").get<int>() == 3);
    CHECK(j.at("f1_informative").get<double>() == doctest::Approx(0.75));
    CHECK(m.to_json().find('\n') == std::string::npos);
}
