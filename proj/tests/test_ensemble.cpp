// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "tweetinform/ensemble.hpp"
#include "tweetinform/error.hpp"

using namespace ti;

namespace {

constexpr auto I = ClassLabel::Informative;
constexpr auto U = ClassLabel::Uninformative;

PredictionVector pv(double pi) { return {1.0 - pi, pi}; }

std::string words(std::size_t n)
{
    std::string s;
    for (std::size_t i = 0; i < n; ++i) {
        s += (i ? " w" : "w") + std::to_string(i);
    }
    return s;
}

} // namespace

TEST_CASE("classify")
{
    CHECK(classify({0.3, 0.7}) == I);
    CHECK(classify({0.7, 0.3}) == U);
    CHECK(classify({0.5, 0.5}) == I);
    CHECK_THROWS_AS(classify({0.7, 0.7}), ValidationError);
    CHECK_THROWS_AS(classify({-0.2, 1.2}), ValidationError);
    CHECK_NOTHROW(classify({0.3 + 5e-7, 0.7}));
}

TEST_CASE("majority vote")
{
    const std::vector<PredictionVector> votes{pv(0.9), pv(0.6), pv(0.1)};
    CHECK(majority_vote(votes) == I);
    CHECK(majority_vote(std::vector<PredictionVector>{pv(0.2)}) == U);
    // even tie falls back to averaging: mean p_i = 0.45
    CHECK(majority_vote(std::vector<PredictionVector>{pv(0.6), pv(0.3)}) == U);
    CHECK(majority_vote(std::vector<PredictionVector>{pv(0.9), pv(0.3)}) == I);
    CHECK_THROWS_AS(majority_vote({}), ValidationError);
}

TEST_CASE("average softmax")
{
    const std::vector<PredictionVector> preds{{0.6, 0.4}, {0.3, 0.7}, {0.4, 0.6}};
    CHECK(average_softmax(preds) == I);
    CHECK(average_softmax(std::vector<PredictionVector>{pv(0.5), pv(0.5)}) == I);
    CHECK_THROWS_AS(average_softmax({}), ValidationError);
    for (double p : {0.1, 0.5, 0.8}) {
        const std::vector<PredictionVector> same(5, pv(p));
        CHECK(average_softmax(same) == classify(pv(p)));
        CHECK(majority_vote(same) == classify(pv(p)));
    }
}

TEST_CASE("average softmax is order invariant")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<PredictionVector> preds(1 + rng() % 13);
        for (auto& p : preds) {
            p = pv(u(rng));
        }
        const auto base = average_softmax(preds);
        std::shuffle(preds.begin(), preds.end(), rng);
        CHECK(average_softmax(preds) == base);
    }
}

TEST_CASE("bucket selection picks the per-bucket winner")
{
    // tweet 0 short, tweet 1 long
    LabeledCorpus ref;
    ref.records = {test::record("a", words(5), I), test::record("b", words(50), U)};
    const std::vector<ModelPredictions> models{{"right", {pv(0.9), pv(0.1)}}, {"wrong", {pv(0.1), pv(0.9)}}};
    const auto map = select_top_models_per_bucket(models, ref, 1);
    CHECK(map.at(LengthBucket::Short) == std::vector<std::string>{"right"});
    CHECK(map.at(LengthBucket::Long) == std::vector<std::string>{"right"});
    // empty Medium bucket inherits the overall top-k
    CHECK(map.at(LengthBucket::Medium) == std::vector<std::string>{"right"});

    const std::vector<ModelPredictions> split{{"m1", {pv(0.9), pv(0.9)}}, {"m2", {pv(0.1), pv(0.1)}}};
    const auto m2 = select_top_models_per_bucket(split, ref, 1);
    CHECK(m2.at(LengthBucket::Short) == std::vector<std::string>{"m1"});
    CHECK(m2.at(LengthBucket::Long) == std::vector<std::string>{"m2"});
    // equal overall accuracy, so the Medium fallback goes by id
    CHECK(m2.at(LengthBucket::Medium) == std::vector<std::string>{"m1"});
}

TEST_CASE("bucket selection with identical models and errors")
{
    const auto ref = test::synthetic_corpus(20, 2);
    std::vector<ModelPredictions> models;
    for (int i = 12; i >= 0; --i) {
        char id[8];
        std::snprintf(id, sizeof(id), "m%02d", i);
        models.push_back({id, std::vector<PredictionVector>(20, pv(0.7))});
    }
    const auto map = select_top_models_per_bucket(models, ref);
    for (const auto& [bucket, ids] : map) {
        CHECK(ids == std::vector<std::string>{"m00", "m01", "m02", "m03", "m04", "m05", "m06"});
    }
    CHECK(map.size() == 3);
    CHECK_THROWS_AS(select_top_models_per_bucket(std::span(models).first(6), ref), ValidationError);
    models[0].predictions.pop_back();
    CHECK_THROWS_AS(select_top_models_per_bucket(models, ref), ShapeError);
}

TEST_CASE("bucketed routing")
{
    const BucketMap map{{LengthBucket::Short, {"s"}}, {LengthBucket::Medium, {"m"}}, {LengthBucket::Long, {"l"}}};
    const std::map<std::string, PredictionVector> preds{{"s", pv(0.9)}, {"m", pv(0.1)}, {"l", pv(0.2)}};
    CHECK(bucketed_predict(words(10), map, preds) == I);
    CHECK(bucketed_predict(words(30), map, preds) == U);
    CHECK(bucketed_predict(words(50), map, preds, EnsembleRule::Average) == U);
    CHECK_THROWS_AS(bucketed_predict(words(50), BucketMap{{LengthBucket::Short, {"s"}}}, preds), ValidationError);
    CHECK_THROWS_AS(bucketed_predict(words(10), BucketMap{{LengthBucket::Short, {"zz"}}}, preds), ValidationError);
}

TEST_CASE("bucketed ensembling with identical lists reduces to a plain vote")
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n_tweets = 30;
    std::vector<std::string> tweets;
    for (std::size_t t = 0; t < n_tweets; ++t) {
        tweets.push_back(words(1 + rng() % 60));
    }
    std::vector<ModelPredictions> models;
    std::vector<std::string> ids;
    for (int m = 0; m < 7; ++m) {
        ModelPredictions mp{"m" + std::to_string(m), {}};
        for (std::size_t t = 0; t < n_tweets; ++t) {
            mp.predictions.push_back(pv(u(rng)));
        }
        ids.push_back(mp.id);
        models.push_back(std::move(mp));
    }
    EnsembleSpec plain{ids, EnsembleRule::MajorityVote, std::nullopt};
    EnsembleSpec bucketed{ids, EnsembleRule::MajorityVote,
                          BucketMap{{LengthBucket::Short, ids}, {LengthBucket::Medium, ids}, {LengthBucket::Long, ids}}};
    CHECK(ensemble_predict(plain, models, tweets) == ensemble_predict(bucketed, models, tweets));
    EnsembleSpec empty;
    CHECK_THROWS_AS(empty.validate(), ValidationError);
}

TEST_CASE("interchange files round trip")
{
    const std::vector<std::string> ids{"1", "x2"};
    const std::vector<PredictionVector> preds{{0.25, 0.75}, {1.0 / 3.0, 2.0 / 3.0}};
    const auto text = format_predictions(ids, preds);
    CHECK(text.rfind("1\t0.25\t0.75\n", 0) == 0);
    const auto back = parse_predictions(text);
    CHECK(back.ids == ids);
    CHECK(back.predictions == preds);
    CHECK_THROWS_AS(parse_predictions("1\t0.5\n"), ParseError);
    CHECK_THROWS_AS(parse_predictions("1\t0.9\t0.9\n"), ParseError);

    const std::vector<ClassLabel> labels{I, U};
    const auto lab = parse_labels(format_labels(ids, labels));
    REQUIRE(lab.size() == 2);
    CHECK(lab[1] == std::pair<std::string, ClassLabel>{"x2", U});

    const BucketMap map{{LengthBucket::Short, {"a", "b"}}, {LengthBucket::Long, {"c"}}};
    CHECK(format_bucket_map(map) == "Short\ta,b\nLong\tc\n");
    CHECK(parse_bucket_map(format_bucket_map(map)) == map);
    CHECK(parse_rule("vote") == EnsembleRule::MajorityVote);
    CHECK(parse_rule("average") == EnsembleRule::Average);
    CHECK_THROWS_AS(parse_rule("max"), ValidationError);
}
