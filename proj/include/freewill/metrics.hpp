#pragma once

#include <vector>

#include "freewill/env.hpp"
#include "freewill/policy.hpp"

namespace freewill {

// Per-step trace entry for one agent. `policy` is the post-update snapshot
// used by the entropy and KL series; `temperature` and `eps` are the values
// in force after the step's updates.
struct StepRecord {
    long t = 0;
    int action = 0;
    int reward = 0;
    PolicyDistribution policy;
    double temperature = 0.0;
    double eps = 0.0;
    double psi_chosen = 0.0;
};

enum class EntropyBase { Bits, Nats };

// Windowed mean; output[i] = mean(series[i .. i+window-1]), so the result
// is window-1 entries shorter than the input.
std::vector<double> moving_average(const std::vector<double>& series, int window);

// Shannon entropy with 0*log(0) = 0. Bounded by log(|A|) in the chosen base.
double shannon_entropy(const PolicyDistribution& dist, EntropyBase base);

// KL(p || q) in nats over the support of p. Throws DivergenceUndefined when
// q assigns zero mass where p does not.
double kl_divergence(const PolicyDistribution& p, const PolicyDistribution& q);

// Fraction of distinct arms tried so far, per step. Non-decreasing.
std::vector<double> novelty_series(const std::vector<int>& actions, int num_arms);

// Running sum of (best expected reward - chosen arm's expected reward).
std::vector<double> cumulative_regret(const std::vector<StepRecord>& records,
                                      const PhaseSchedule& schedule);

// All per-run series derived from one trace pair.
struct RunMetrics {
    std::vector<double> rolling_reward_fw, rolling_reward_base;
    std::vector<double> entropy_bits_fw, entropy_bits_base;
    std::vector<double> entropy_nats_fw, entropy_nats_base;
    std::vector<double> kl;  // KL(freewill policy || baseline policy) per step
    std::vector<double> novelty_fw, novelty_base;
    std::vector<double> regret_fw, regret_base;
};

RunMetrics compute_run_metrics(const std::vector<StepRecord>& freewill,
                               const std::vector<StepRecord>& baseline,
                               const PhaseSchedule& schedule, int window);

}  // namespace freewill
