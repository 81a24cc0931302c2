// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <array>

#include "grad_cases.hpp"
#include "tweetinform/error.hpp"

using namespace ti;
using namespace ti::nn;
using test::gradcheck;
using test::project;
using test::random_tensor;

namespace {

constexpr double kTol = 1e-5;

} // namespace

TEST_CASE("primitive gradients match finite differences")
{
    for (const auto& c_ : test::primitive_grad_cases()) {
        CAPTURE(c_.name);
        const auto r = gradcheck(c_.fn, c_.inputs);
        CHECK(r.max_relative < kTol);
        CHECK(r.grad_norm > 0.0);
    }
}

TEST_CASE("composite two-layer network")
{
    std::mt19937_64 rng(3);
    auto x = random_tensor({5, 4}, rng);
    auto w1 = random_tensor({4, 6}, rng);
    auto b1 = random_tensor({6}, rng);
    auto w2 = random_tensor({6, 2}, rng);
    auto b2 = random_tensor({2}, rng);
    const std::array<ClassLabel, 5> y{ClassLabel::Informative, ClassLabel::Uninformative, ClassLabel::Informative,
                                      ClassLabel::Informative, ClassLabel::Uninformative};
    const auto r = gradcheck([&] { return cross_entropy(add_row(matmul(gelu(add_row(matmul(x, w1), b1)), w2), b2), y); },
                             {w1, b1, w2, b2});
    CHECK(r.max_relative < 1e-4);
}

TEST_CASE("softmax values")
{
    const auto s = softmax(Tensor::from({1, 2}, {0.0, 0.0}));
    CHECK(s.data()[0] == 0.5);
    CHECK(s.data()[1] == 0.5);
    std::mt19937_64 rng(1);
    const auto big = softmax(random_tensor({7, 9}, rng, -30.0, 30.0));
    for (std::size_t r = 0; r < 7; ++r) {
        double total = 0.0;
        for (std::size_t k = 0; k < 9; ++k) {
            CHECK(big.data()[r * 9 + k] >= 0.0);
            total += big.data()[r * 9 + k];
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
    const auto m = masked_softmax(Tensor::from({1, 3}, {1.0, 2.0, 100.0}), 2);
    CHECK(m.data()[2] == 0.0);
    CHECK(m.data()[0] + m.data()[1] == doctest::Approx(1.0));
}

TEST_CASE("cross entropy approaches zero with confidence")
{
    const std::array<ClassLabel, 1> y{ClassLabel::Informative};
    double previous = INFINITY;
    for (double margin : {1.0, 5.0, 10.0, 30.0}) {
        const double loss = cross_entropy(Tensor::from({1, 2}, {0.0, margin}), y).item();
        CHECK(loss < previous);
        previous = loss;
    }
    CHECK(previous < 1e-12);
}

TEST_CASE("backward basics")
{
    auto w = Tensor::from({2, 3}, {1, 2, 3, 4, 5, 6}, true);
    backward(nn::sum(w));
    for (double g : w.grad()) {
        CHECK(g == 1.0);
    }
    w.zero_grad();
    backward(scale(nn::sum(gelu(w)), 0.0));
    for (double g : w.grad()) {
        CHECK(g == 0.0);
    }
    auto untouched = Tensor::from({2}, {1, 1}, true);
    backward(nn::sum(w));
    CHECK(std::all_of(untouched.grad().begin(), untouched.grad().end(), [](double g) { return g == 0.0; }));
    CHECK_THROWS_AS(backward(w), ShapeError);
}

TEST_CASE("gradients accumulate on leaves across sweeps")
{
    auto w = Tensor::from({2}, {1.0, -1.0}, true);
    backward(nn::sum(w));
    backward(nn::sum(scale(w, 2.0)));
    CHECK(w.grad()[0] == 3.0);
    CHECK(w.grad()[1] == 3.0);
}

TEST_CASE("shape errors name the op")
{
    const auto a = Tensor::zeros({3, 4});
    const auto b = Tensor::zeros({3, 5});
    try {
        (void)matmul(a, b);
        FAIL("expected ShapeError");
    } catch (const ShapeError& e) {
        CHECK(std::string(e.what()).find("matmul") != std::string::npos);
        CHECK(std::string(e.what()).find("[3,5]") != std::string::npos);
    }
    CHECK_THROWS_AS(add(a, b), ShapeError);
    CHECK_THROWS_AS(slice_cols(a, 3, 2), ShapeError);
}

TEST_CASE("dropout is deterministic and inverted")
{
    const auto x = Tensor::from({1, 2000}, std::vector<double>(2000, 1.0));
    const auto y1 = dropout(x, 0.25, 5);
    const auto y2 = dropout(x, 0.25, 5);
    const auto y3 = dropout(x, 0.25, 6);
    CHECK(std::equal(y1.data().begin(), y1.data().end(), y2.data().begin()));
    CHECK_FALSE(std::equal(y1.data().begin(), y1.data().end(), y3.data().begin()));
    std::size_t zeros = 0;
    for (double v : y1.data()) {
        CHECK((v == 0.0 || v == doctest::Approx(1.0 / 0.75)));
        zeros += v == 0.0 ? 1 : 0;
    }
    CHECK(zeros > 400);
    CHECK(zeros < 600);
    const auto id = dropout(x, 0.0, 5);
    CHECK(std::equal(id.data().begin(), id.data().end(), x.data().begin()));
}

TEST_CASE("no-grad mode records nothing")
{
    auto w = Tensor::from({2}, {1.0, 2.0}, true);
    {
        NoGradGuard guard;
        CHECK_FALSE(grad_enabled());
        const auto y = nn::sum(scale(w, 3.0));
        CHECK_FALSE(y.requires_grad());
        CHECK(y.node()->parents.empty());
    }
    CHECK(grad_enabled());
}
