#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "freewill/errors.hpp"
#include "freewill/policy.hpp"
#include "freewill/rng.hpp"

using namespace freewill;

TEST_CASE("splitmix64 matches the published reference sequence") {
    RngStream r0(0);
    CHECK(r0.next_u64() == 0xe220a8397b1dcdafULL);
    CHECK(r0.next_u64() == 0x6e789e6aa1b965f4ULL);
    CHECK(r0.next_u64() == 0x06c45d188009454fULL);
    RngStream r42(42);
    CHECK(r42.next_u64() == 0xbdd732262feb6e95ULL);
}

TEST_CASE("same seed gives the same draw sequence") {
    RngStream a(123456789), b(123456789);
    for (int i = 0; i < 10000; ++i) CHECK(a.next_u64() == b.next_u64());
    RngStream c(1), d(2);
    bool all_equal = true;
    for (int i = 0; i < 16; ++i) all_equal = all_equal && (c.next_u64() == d.next_u64());
    CHECK_FALSE(all_equal);
}

TEST_CASE("next_double stays in [0,1) and uniform_index in range") {
    RngStream r(7);
    for (int i = 0; i < 10000; ++i) {
        const double u = r.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    RngStream r2(8);
    for (int i = 0; i < 1000; ++i) {
        const int k = r2.uniform_index(7);
        CHECK(k >= 0);
        CHECK(k < 7);
    }
    CHECK_THROWS_AS(r2.uniform_index(0), InvalidInput);
}

TEST_CASE("softmax on flat scores is uniform") {
    const PolicyDistribution p = softmax({0, 0, 0, 0});
    for (double v : p.probs) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("softmax closed form for [1, 0]") {
    const PolicyDistribution p = softmax({1, 0});
    const double e = std::exp(1.0);
    CHECK(p.probs[0] == doctest::Approx(e / (e + 1)).epsilon(1e-12));
    CHECK(p.probs[1] == doctest::Approx(1 / (e + 1)).epsilon(1e-12));
    CHECK(p.probs[0] == doctest::Approx(0.7310585786300049).epsilon(1e-12));
}

TEST_CASE("softmax survives huge scores via max subtraction") {
    const PolicyDistribution p = softmax({1000, 1000});
    CHECK(p.probs[0] == doctest::Approx(0.5));
    CHECK(p.probs[1] == doctest::Approx(0.5));
    const PolicyDistribution q = softmax({1e308, 0});
    CHECK(std::isfinite(q.probs[0]));
    CHECK(q.probs[0] == doctest::Approx(1.0));
}

TEST_CASE("softmax rejects empty and non-finite input") {
    CHECK_THROWS_AS(softmax({}), InvalidInput);
    CHECK_THROWS_AS(softmax({1.0, std::numeric_limits<double>::quiet_NaN()}), InvalidInput);
    CHECK_THROWS_AS(softmax({1.0, std::numeric_limits<double>::infinity()}), InvalidInput);
}

TEST_CASE("softmax output is a valid distribution for random scores") {
    RngStream r(99);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + r.uniform_index(8);
        std::vector<double> scores(n);
        for (double& s : scores) s = (r.next_double() - 0.5) * 200.0;
        const PolicyDistribution p = softmax(scores);
        CHECK_NOTHROW(p.validate());
    }
}

TEST_CASE("softmax is invariant under a constant shift") {
    RngStream r(100);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> scores(5);
        for (double& s : scores) s = (r.next_double() - 0.5) * 20.0;
        const double c = (r.next_double() - 0.5) * 100.0;
        std::vector<double> shifted = scores;
        for (double& s : shifted) s += c;
        const PolicyDistribution a = softmax(scores), b = softmax(shifted);
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(a.probs[i] == doctest::Approx(b.probs[i]).epsilon(1e-12));
    }
}

TEST_CASE("degenerate categorical always returns its only atom") {
    RngStream r(5);
    const PolicyDistribution p{{1.0, 0.0, 0.0}};
    for (int i = 0; i < 1000; ++i) CHECK(sample_categorical(p, r) == 0);
}

TEST_CASE("categorical sampling matches the distribution within TV 0.02") {
    const PolicyDistribution p{{0.2, 0.3, 0.5}};
    RngStream r(2024);
    const int n = 100000;
    std::vector<int> counts(3, 0);
    for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(sample_categorical(p, r))];
    double tv = 0.0;
    for (int a = 0; a < 3; ++a)
        tv += std::abs(static_cast<double>(counts[static_cast<std::size_t>(a)]) / n -
                       p.probs[static_cast<std::size_t>(a)]);
    tv /= 2.0;
    CHECK(tv <= 0.02);
    for (int a = 0; a < 3; ++a) {
        const double freq = static_cast<double>(counts[static_cast<std::size_t>(a)]) / n;
        CHECK(std::abs(freq - p.probs[static_cast<std::size_t>(a)]) <= 0.01);
    }
}

TEST_CASE("fair coin frequency lands in [0.49, 0.51] at 1e5 draws") {
    const PolicyDistribution p{{0.5, 0.5}};
    RngStream r(31337);
    int zeros = 0;
    for (int i = 0; i < 100000; ++i)
        if (sample_categorical(p, r) == 0) ++zeros;
    const double freq = zeros / 100000.0;
    CHECK(freq >= 0.49);
    CHECK(freq <= 0.51);
}

TEST_CASE("categorical sampling rejects invalid distributions") {
    RngStream r(1);
    CHECK_THROWS_AS(sample_categorical(PolicyDistribution{{0.5, 0.4}}, r), InvalidInput);
    CHECK_THROWS_AS(sample_categorical(PolicyDistribution{{}}, r), InvalidInput);
    CHECK_THROWS_AS(sample_categorical(PolicyDistribution{{1.2, -0.2}}, r), InvalidInput);
}

TEST_CASE("bernoulli endpoints are deterministic") {
    RngStream r(9);
    for (int i = 0; i < 100; ++i) {
        CHECK(bernoulli(1.0, r) == 1);
        CHECK(bernoulli(0.0, r) == 0);
    }
}

TEST_CASE("bernoulli(0.8) mean lands in [0.79, 0.81] at 1e4 draws") {
    RngStream r(555);
    int sum = 0;
    for (int i = 0; i < 10000; ++i) sum += bernoulli(0.8, r);
    const double mean = sum / 10000.0;
    CHECK(mean >= 0.79);
    CHECK(mean <= 0.81);
}

TEST_CASE("bernoulli rejects p outside [0, 1]") {
    RngStream r(1);
    CHECK_THROWS_AS(bernoulli(-0.1, r), InvalidInput);
    CHECK_THROWS_AS(bernoulli(1.1, r), InvalidInput);
    CHECK_THROWS_AS(bernoulli(std::numeric_limits<double>::quiet_NaN(), r), InvalidInput);
}
