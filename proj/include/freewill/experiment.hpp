#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "freewill/agent.hpp"
#include "freewill/env.hpp"
#include "freewill/metrics.hpp"

namespace freewill {

struct ExperimentConfig {
    PhaseSchedule schedule;
    long total_steps = 2000;
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    FreeWillParams freewill;
    BaselineParams baseline;
    int metrics_window = 50;

    void validate() const;  // throws InvalidInput
};

// Both agents' step records for one seeded run.
struct RunTrace {
    std::uint64_t seed = 0;
    std::vector<StepRecord> freewill;
    std::vector<StepRecord> baseline;
};

struct SeriesStats {
    std::vector<double> mean;
    std::vector<double> stddev;  // population (divisor N)
};

struct AgentSeries {
    SeriesStats rolling_reward, entropy_bits, entropy_nats, novelty, regret;
};

struct AggregateResult {
    AgentSeries freewill;
    AgentSeries baseline;
    SeriesStats kl;                // KL(freewill || baseline), one series per run
    std::vector<RunTrace> runs;    // raw traces, in seed order
};

// Elementwise mean and population standard deviation over equal-length
// series. Per-index summation happens in a canonical (sorted) order, so the
// result does not depend on the order in which the series are supplied.
std::pair<std::vector<double>, std::vector<double>> aggregate(
    const std::vector<std::vector<double>>& series_set);

// Runs both agents for total_steps against independently seeded copies of
// the schedule. The trace pair is a pure function of (config, seed).
//
// Stream derivation from the run seed: the freewill environment uses the
// seed verbatim, the baseline environment uses seed xor a fixed constant,
// and each agent's selection stream uses its own fixed constant. In Oracle
// mode the freewill agent's observe call carries change_signal = true at
// each phase-change step.
RunTrace run_single(const ExperimentConfig& config, std::uint64_t seed);

// One run per seed (parallel up to `jobs` threads; 0 means hardware
// concurrency), then per-metric aggregation across runs. Joining is by
// seed order, so the result is independent of scheduling.
AggregateResult run_many(const ExperimentConfig& config, int jobs = 0);

}  // namespace freewill
