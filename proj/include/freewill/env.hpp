#pragma once

#include <vector>

#include "freewill/policy.hpp"
#include "freewill/rng.hpp"

namespace freewill {

// One regime of a non-stationary bandit: from `start_step` on, arm i pays
// a Bernoulli reward with probability arm_probs[i].
struct Phase {
    long start_step = 0;
    std::vector<double> arm_probs;
};

// Ordered list of phases. The first phase starts at step 0, start steps
// strictly increase, and all phases have the same arm count.
class PhaseSchedule {
public:
    PhaseSchedule() = default;
    explicit PhaseSchedule(std::vector<Phase> phases);

    int arm_count() const;
    const std::vector<Phase>& phases() const { return phases_; }

    // Arm probabilities of the phase active at step t. Piecewise constant
    // and right-continuous: the new phase applies at its own start step.
    const std::vector<double>& probs_at(long t) const;

    // Best achievable expected reward at step t.
    double optimal_at(long t) const;

    // Start steps of every phase after the first (the change points).
    std::vector<long> change_steps() const;

private:
    std::vector<Phase> phases_;
};

// Bernoulli bandit driven by a phase schedule and a private stream.
// The clock advances by one per step.
class BanditEnv {
public:
    BanditEnv(PhaseSchedule schedule, RngStream rng)
        : schedule_(std::move(schedule)), rng_(rng) {}

    // Pulls `action`, returns the binary reward, advances the clock.
    int step(int action);

    const std::vector<double>& active_probs(long t) const { return schedule_.probs_at(t); }
    double optimal_expected(long t) const { return schedule_.optimal_at(t); }

    long clock() const { return clock_; }
    int arm_count() const { return schedule_.arm_count(); }
    const PhaseSchedule& schedule() const { return schedule_; }

private:
    PhaseSchedule schedule_;
    RngStream rng_;
    long clock_ = 0;
};

// Built-in 4-arm schedule: [0.8, 0.5, 0.3, 0.2] switching to
// [0.2, 0.3, 0.8, 0.2] at step 1000 (best arm 0, then best arm 2).
PhaseSchedule preset_schedule_4arm();

// Built-in 10-arm schedule: 10 evenly spaced probabilities from 0.1 to 0.8
// with the last overwritten to 0.2; at step 1000 the spacing reverses and
// the first entry is overwritten to 0.2 (best arm 8, then best arm 1).
PhaseSchedule preset_schedule_10arm();

}  // namespace freewill
