#include "freewill/env.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "freewill/errors.hpp"

namespace freewill {

PhaseSchedule::PhaseSchedule(std::vector<Phase> phases) : phases_(std::move(phases)) {
    if (phases_.empty()) throw InvalidInput("schedule: needs at least one phase");
    if (phases_.front().start_step != 0)
        throw InvalidInput("schedule: first phase must start at step 0");
    const std::size_t arms = phases_.front().arm_probs.size();
    if (arms == 0) throw InvalidInput("schedule: phases need at least one arm");
    long prev = -1;
    for (const Phase& ph : phases_) {
        if (ph.start_step <= prev)
            throw InvalidInput("schedule: start steps must strictly increase");
        prev = ph.start_step;
        if (ph.arm_probs.size() != arms)
            throw InvalidInput("schedule: all phases must have the same arm count");
        for (double p : ph.arm_probs)
            if (!(p >= 0.0 && p <= 1.0))
                throw InvalidInput("schedule: arm probabilities must be in [0, 1]");
    }
}

int PhaseSchedule::arm_count() const {
    return static_cast<int>(phases_.front().arm_probs.size());
}

const std::vector<double>& PhaseSchedule::probs_at(long t) const {
    // Last phase whose start step is <= t. The first phase starts at 0, so
    // one always exists for t >= 0.
    const Phase* active = &phases_.front();
    for (const Phase& ph : phases_) {
        if (ph.start_step <= t) active = &ph;
        else break;
    }
    return active->arm_probs;
}

double PhaseSchedule::optimal_at(long t) const {
    const std::vector<double>& probs = probs_at(t);
    return *std::max_element(probs.begin(), probs.end());
}

std::vector<long> PhaseSchedule::change_steps() const {
    std::vector<long> steps;
    for (std::size_t i = 1; i < phases_.size(); ++i)
        steps.push_back(phases_[i].start_step);
    return steps;
}

int BanditEnv::step(int action) {
    if (action < 0 || action >= arm_count())
        throw InvalidInput("env: action " + std::to_string(action) + " out of range");
    const int reward = bernoulli(schedule_.probs_at(clock_)[action], rng_);
    ++clock_;
    return reward;
}

PhaseSchedule preset_schedule_4arm() {
    return PhaseSchedule({
        {0, {0.8, 0.5, 0.3, 0.2}},
        {1000, {0.2, 0.3, 0.8, 0.2}},
    });
}

PhaseSchedule preset_schedule_10arm() {
    const int n = 10;
    std::vector<double> up(n), down(n);
    for (int i = 0; i < n; ++i) up[i] = 0.1 + static_cast<double>(i) * (0.8 - 0.1) / (n - 1);
    up.back() = 0.8;  // pin the endpoint before it is overwritten below
    for (int i = 0; i < n; ++i) down[i] = up[n - 1 - i];
    up[n - 1] = 0.2;
    down[0] = 0.2;
    return PhaseSchedule({{0, up}, {1000, down}});
}

}  // namespace freewill
