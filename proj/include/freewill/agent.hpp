#pragma once

#include <cstdint>
#include <deque>
#include <unordered_map>
#include <vector>

#include "freewill/policy.hpp"
#include "freewill/rng.hpp"

namespace freewill {

// How per-arm scores are formed from value estimates and the novelty bonus.
//   Formula: (Q + alpha * I) / T      (temperature divides everything)
//   Code:     Q + T * alpha * I       (temperature scales the bonus only)
enum class ScoreVariant { Formula, Code };

// What drives the exploration boost. The temperature always adapts to
// surprise; Oracle mode additionally resets eps and T when the runner
// signals an environment change.
enum class TriggerVariant { Endogenous, Oracle };

// Value-table keying. Single: one row for the whole bandit (learning
// accumulates). Time: one fresh row per step, so each decision sees
// zero-initialized estimates.
enum class StateMode { Single, Time };

struct FreeWillParams {
    double alpha = 0.1;            // novelty bonus weight
    double eta = 0.1;              // learning rate (value and propensity updates)
    double tau = 0.4;              // surprise threshold
    double t_init = 0.5;
    double t_min = 0.01;
    double t_max = 2.0;
    double gamma_inc = 1.05;       // temperature multiplier on surprise
    double gamma_dec = 0.85;       // temperature multiplier otherwise
    double discount = 0.9;
    int surprise_window = 50;      // reward history length behind the surprise mean
    double eps_init = 0.5;         // uniform-random overlay, decays linearly
    double eps_decay = 0.001;
    double eps_floor = 0.01;
    ScoreVariant score_variant = ScoreVariant::Formula;
    TriggerVariant trigger_variant = TriggerVariant::Endogenous;
    StateMode state_mode = StateMode::Single;

    void validate() const;  // throws InvalidInput
};

struct BaselineParams {
    double eta = 0.1;
    double discount = 0.9;
    double eps_init = 0.5;
    double eps_decay = 0.001;
    double eps_floor = 0.01;

    void validate() const;
};

// Count-based novelty bonus 1 / sqrt(1 + n). Strictly decreasing, in (0, 1].
double intrinsic_bonus(long n);

// Per-arm score vector for the chosen variant. Softmax of this is the policy.
std::vector<double> action_scores(const std::vector<double>& q_row,
                                  const std::vector<long>& n_row,
                                  double temperature, double alpha,
                                  ScoreVariant variant);

// |reward - mean(history)|; zero when there is no history yet.
double surprise(double reward, const std::deque<double>& history);

// Multiplicative temperature adaptation, clamped to [t_min, t_max].
double temperature_update(double temperature, double surprise_value,
                          const FreeWillParams& p);

// Propensity trace update:
//   psi_a += eta * (r * [a == chosen] + alpha * bonus_a - psi_a)
// Recorded per step as a diagnostic; action selection does not read it.
std::vector<double> psi_update(const std::vector<double>& psi_row, int chosen,
                               double reward, const std::vector<double>& bonus_row,
                               const FreeWillParams& p);

// eps/|A| everywhere plus 1 - eps on the greedy arm (ties to lowest index).
PolicyDistribution baseline_policy_distribution(const std::vector<double>& q_row,
                                                double eps);

struct Selection {
    int action;
    PolicyDistribution policy;  // the softmax the sample came from, eps overlay excluded
};

// Adaptive-temperature softmax learner with a count-based novelty bonus,
// a surprise-driven temperature, and a decaying uniform-random overlay.
//
// Draw order per step: one eps coin, then exactly one more draw (uniform
// pick or categorical sample). The environment's reward coin follows.
class FreeWillAgent {
public:
    FreeWillAgent(int num_arms, FreeWillParams params);

    // Does not mutate the agent; consumes exactly two draws from `rng`.
    Selection select(RngStream& rng) const;

    // Applies the step's outcome, in order: reward history and surprise,
    // temperature, optional oracle reset, Q update, visit count, propensity
    // trace, eps decay. `change_signal` is honored only in Oracle mode; a
    // reset leaves eps exactly at eps_init for that step.
    void observe(int action, int reward, bool change_signal);

    // Post-observe snapshot of the just-updated state row.
    const PolicyDistribution& last_policy() const { return snapshot_policy_; }
    double last_psi_chosen() const { return snapshot_psi_chosen_; }

    double temperature() const { return temperature_; }
    double exploration_rate() const { return eps_; }
    int arm_count() const { return num_arms_; }
    long steps_observed() const { return step_; }
    long visits(long state, int action) const;
    double q_value(long state, int action) const;
    double psi_value(long state, int action) const;
    const FreeWillParams& params() const { return params_; }

private:
    long current_state() const;
    long next_state() const;
    PolicyDistribution policy_for(long state) const;

    int num_arms_;
    FreeWillParams params_;
    double temperature_;
    double eps_;
    long step_ = 0;
    std::unordered_map<long, std::vector<double>> q_;
    std::unordered_map<long, std::vector<long>> n_;
    std::unordered_map<long, std::vector<double>> psi_;
    std::deque<double> rewards_;
    PolicyDistribution snapshot_policy_;
    double snapshot_psi_chosen_ = 0.0;
};

// Decaying eps-greedy control agent. Its value table is keyed by time step,
// so the greedy branch always reads a fresh zero row and resolves to the
// lowest-indexed arm; learning carries no information across steps.
class BaselineAgent {
public:
    BaselineAgent(int num_arms, BaselineParams params);

    // Consumes one draw when greedy, two when exploring.
    int select(RngStream& rng) const;

    void observe(int action, int reward);

    // Post-observe snapshot: eps-greedy distribution over the updated row.
    const PolicyDistribution& last_policy() const { return snapshot_policy_; }

    double exploration_rate() const { return eps_; }
    int arm_count() const { return num_arms_; }
    double q_value(long state, int action) const;

private:
    int num_arms_;
    BaselineParams params_;
    double eps_;
    long step_ = 0;
    std::unordered_map<long, std::vector<double>> q_;
    PolicyDistribution snapshot_policy_;
};

}  // namespace freewill
