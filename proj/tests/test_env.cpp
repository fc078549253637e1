#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "freewill/env.hpp"
#include "freewill/errors.hpp"

using namespace freewill;

TEST_CASE("4-arm preset phases") {
    const PhaseSchedule s = preset_schedule_4arm();
    CHECK(s.arm_count() == 4);
    CHECK(s.probs_at(0)[0] == 0.8);
    CHECK(s.probs_at(999)[0] == 0.8);
    CHECK(s.probs_at(1000)[2] == 0.8);   // right-continuous at the boundary
    CHECK(s.probs_at(5000)[2] == 0.8);
    CHECK(s.change_steps() == std::vector<long>{1000});
    CHECK(s.optimal_at(0) == 0.8);
    CHECK(s.optimal_at(1500) == 0.8);
}

TEST_CASE("10-arm preset matches the even-spacing construction") {
    const PhaseSchedule s = preset_schedule_10arm();
    CHECK(s.arm_count() == 10);
    // entry 8 of linspace(0.1, 0.8, 10) = 0.1 + 8 * 0.7 / 9
    CHECK(s.probs_at(0)[8] == doctest::Approx(0.7222222222222222).epsilon(1e-12));
    CHECK(s.probs_at(0)[9] == 0.2);
    CHECK(s.probs_at(1000)[0] == 0.2);
    CHECK(s.probs_at(1000)[1] == doctest::Approx(0.7222222222222222).epsilon(1e-12));
    CHECK(s.optimal_at(0) == doctest::Approx(0.7222222222222222).epsilon(1e-12));
    CHECK(s.optimal_at(1000) == doctest::Approx(0.7222222222222222).epsilon(1e-12));
}

TEST_CASE("single-phase schedule is the identity case") {
    const PhaseSchedule s({{0, {0.4, 0.6}}});
    CHECK(s.probs_at(0)[1] == 0.6);
    CHECK(s.probs_at(123456)[1] == 0.6);
    CHECK(s.change_steps().empty());
}

TEST_CASE("schedule invariants are enforced") {
    CHECK_THROWS_AS(PhaseSchedule(std::vector<Phase>{}), InvalidInput);
    CHECK_THROWS_AS(PhaseSchedule(std::vector<Phase>{{5, {0.5}}}), InvalidInput);  // first phase not at 0
    CHECK_THROWS_AS(PhaseSchedule({{0, {0.5}}, {0, {0.6}}}), InvalidInput);
    CHECK_THROWS_AS(PhaseSchedule({{0, {0.5, 0.5}}, {10, {0.5}}}), InvalidInput);
    CHECK_THROWS_AS(PhaseSchedule(std::vector<Phase>{{0, {1.5}}}), InvalidInput);
    CHECK_THROWS_AS(PhaseSchedule(std::vector<Phase>{{0, {-0.1}}}), InvalidInput);
}

TEST_CASE("deterministic arms produce deterministic rewards") {
    BanditEnv sure(PhaseSchedule(std::vector<Phase>{{0, {1.0, 0.0}}}), RngStream(3));
    for (int i = 0; i < 50; ++i) CHECK(sure.step(0) == 1);
    BanditEnv never(PhaseSchedule(std::vector<Phase>{{0, {1.0, 0.0}}}), RngStream(3));
    for (int i = 0; i < 50; ++i) CHECK(never.step(1) == 0);
}

TEST_CASE("step advances the clock and validates the action") {
    BanditEnv env(preset_schedule_4arm(), RngStream(17));
    CHECK(env.clock() == 0);
    env.step(2);
    CHECK(env.clock() == 1);
    CHECK_THROWS_AS(env.step(4), InvalidInput);
    CHECK_THROWS_AS(env.step(-1), InvalidInput);
}

TEST_CASE("empirical reward mean of a fixed arm converges to its probability") {
    // single-phase copy of the 4-arm phase-1 vector, pulled 1e4 times
    BanditEnv env(PhaseSchedule(std::vector<Phase>{{0, {0.8, 0.5, 0.3, 0.2}}}), RngStream(91));
    long sum = 0;
    for (int i = 0; i < 10000; ++i) sum += env.step(0);
    const double mean = static_cast<double>(sum) / 10000.0;
    CHECK(mean >= 0.79);
    CHECK(mean <= 0.81);

    BanditEnv env2(PhaseSchedule(std::vector<Phase>{{0, {0.8, 0.5, 0.3, 0.2}}}), RngStream(92));
    sum = 0;
    for (int i = 0; i < 100000; ++i) sum += env2.step(3);
    CHECK(std::abs(static_cast<double>(sum) / 100000.0 - 0.2) <= 0.01);
}

TEST_CASE("reward sequence is a pure function of schedule, seed and actions") {
    auto roll = [](std::uint64_t seed) {
        BanditEnv env(preset_schedule_4arm(), RngStream(seed));
        std::vector<int> rewards;
        for (int i = 0; i < 300; ++i) rewards.push_back(env.step(i % 4));
        return rewards;
    };
    CHECK(roll(7) == roll(7));
    CHECK(roll(7) != roll(8));
}
