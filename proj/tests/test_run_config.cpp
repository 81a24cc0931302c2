// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "tweetinform/error.hpp"
#include "tweetinform/run_config.hpp"

using namespace ti;

TEST_CASE("empty document yields documented defaults")
{
    const auto rc = parse_run_config("");
    CHECK(rc.plan.phase1.lr0 == doctest::Approx(5e-4));
    CHECK(rc.plan.phase1.epochs == 12);
    CHECK(rc.plan.phase2.lr0 == doctest::Approx(4e-5));
    CHECK(rc.plan.phase2.epochs == 6);
    CHECK(rc.plan.batch_size == 16);
    CHECK(rc.model.encoder.max_len == 256);
    CHECK(rc.bpe_vocab_size == 4000);
    CHECK(rc.bpe_path.empty());
    CHECK(rc.train_file == "train.tsv");
    CHECK(rc.header == HeaderMode::Auto);
    CHECK(rc.values.size() == run_config_keys().size());
}

TEST_CASE("comments, blanks and spacing")
{
    const auto rc = parse_run_config("# tiny\n\n  encoder.n_layers=2\nphase1.epochs   =  3 \n  # x = 1\n");
    CHECK(rc.model.encoder.n_layers == 2);
    CHECK(rc.plan.phase1.epochs == 3);
}

TEST_CASE("seed drives init and shuffling")
{
    const auto rc = parse_run_config("seed = 42\n");
    CHECK(rc.seed == 42);
    CHECK(rc.plan.seed == 42);
    CHECK(rc.model.init_seed == 42);
}

TEST_CASE("unknown key is rejected with its line")
{
    try {
        parse_run_config("batch_size = 8\nlearning_rate = 1\n");
        FAIL("expected throw");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("learning_rate") != std::string::npos);
        CHECK(msg.find("line 2") != std::string::npos);
    }
}

TEST_CASE("malformed and repeated lines")
{
    CHECK_THROWS_AS(parse_run_config("batch_size 8\n"), ParseError);
    CHECK_THROWS_AS(parse_run_config("seed = 1\nseed = 2\n"), ParseError);
    CHECK_THROWS_AS(parse_run_config("batch_size = 0\n"), ValidationError);
    CHECK_THROWS_AS(parse_run_config("phase2.epochs = 0\n"), ValidationError);
    CHECK_THROWS_AS(parse_run_config("data.header = maybe\n"), ValidationError);
    CHECK_THROWS(parse_run_config("strategy = middle\n"));
}

TEST_CASE("overrides apply after the document")
{
    const auto rc = parse_run_config("batch_size = 8\n", {{"batch_size", "4"}, {"strategy", "last"}});
    CHECK(rc.plan.batch_size == 4);
    CHECK(rc.values.at("strategy") == "last");
    CHECK_THROWS_AS(parse_run_config("", {{"nope", "1"}}), ValidationError);
}

TEST_CASE("split_assignment")
{
    CHECK(split_assignment(" a.b = c=d ") == std::pair<std::string, std::string>{"a.b", "c=d"});
    CHECK_THROWS_AS(split_assignment("abc"), ValidationError);
}

TEST_CASE("help lists every key with its default")
{
    const auto help = run_config_help();
    for (const auto& k : run_config_keys()) {
        CHECK(help.find(k.key + " = " + k.default_value) != std::string::npos);
    }
}

TEST_CASE("missing file names the path")
{
    try {
        load_run_config("/nonexistent/run.cfg");
        FAIL("expected throw");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/run.cfg") != std::string::npos);
    }
}
