#include "freewill/metrics.hpp"

#include <cmath>
#include <unordered_set>

#include "freewill/errors.hpp"

namespace freewill {

std::vector<double> moving_average(const std::vector<double>& series, int window) {
    if (window < 1) throw InvalidInput("moving_average: window must be >= 1");
    if (series.size() < static_cast<std::size_t>(window))
        throw InvalidInput("moving_average: series shorter than window");
    std::vector<double> out(series.size() - static_cast<std::size_t>(window) + 1);
    // Sliding sum in extended precision keeps the cancellation error well
    // under the 1e-12 oracle tolerance.
    long double acc = 0.0L;
    for (int i = 0; i < window; ++i) acc += series[static_cast<std::size_t>(i)];
    out[0] = static_cast<double>(acc / window);
    for (std::size_t i = 1; i < out.size(); ++i) {
        acc += series[i + static_cast<std::size_t>(window) - 1];
        acc -= series[i - 1];
        out[i] = static_cast<double>(acc / window);
    }
    return out;
}

double shannon_entropy(const PolicyDistribution& dist, EntropyBase base) {
    dist.validate();
    double h = 0.0;
    for (double p : dist.probs)
        if (p > 0.0) h -= p * std::log(p);
    if (base == EntropyBase::Bits) h /= std::log(2.0);
    return h;
}

double kl_divergence(const PolicyDistribution& p, const PolicyDistribution& q) {
    if (p.size() != q.size()) throw InvalidInput("kl_divergence: length mismatch");
    p.validate();
    q.validate();
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.probs[i] <= 0.0) continue;
        if (q.probs[i] <= 0.0)
            throw DivergenceUndefined("kl_divergence: q has zero mass on p's support");
        d += p.probs[i] * std::log(p.probs[i] / q.probs[i]);
    }
    return d;
}

std::vector<double> novelty_series(const std::vector<int>& actions, int num_arms) {
    if (num_arms < 1) throw InvalidInput("novelty_series: num_arms must be >= 1");
    std::vector<char> seen(static_cast<std::size_t>(num_arms), 0);
    int distinct = 0;
    std::vector<double> out;
    out.reserve(actions.size());
    for (int a : actions) {
        if (a < 0 || a >= num_arms) throw InvalidInput("novelty_series: action out of range");
        if (!seen[static_cast<std::size_t>(a)]) {
            seen[static_cast<std::size_t>(a)] = 1;
            ++distinct;
        }
        out.push_back(static_cast<double>(distinct) / static_cast<double>(num_arms));
    }
    return out;
}

std::vector<double> cumulative_regret(const std::vector<StepRecord>& records,
                                      const PhaseSchedule& schedule) {
    if (records.empty()) throw InvalidInput("cumulative_regret: empty trace");
    std::vector<double> out;
    out.reserve(records.size());
    long double acc = 0.0L;  // extended precision; long runs stay within 1e-12 of the oracle
    for (const StepRecord& rec : records) {
        const std::vector<double>& probs = schedule.probs_at(rec.t);
        acc += schedule.optimal_at(rec.t) - probs[static_cast<std::size_t>(rec.action)];
        out.push_back(static_cast<double>(acc));
    }
    return out;
}

RunMetrics compute_run_metrics(const std::vector<StepRecord>& freewill,
                               const std::vector<StepRecord>& baseline,
                               const PhaseSchedule& schedule, int window) {
    RunMetrics m;
    const std::size_t n = freewill.size();
    if (n == 0 || baseline.size() != n)
        throw InvalidInput("compute_run_metrics: traces empty or lengths differ");

    std::vector<double> rewards_fw(n), rewards_base(n);
    std::vector<int> actions_fw(n), actions_base(n);
    m.entropy_bits_fw.resize(n);
    m.entropy_bits_base.resize(n);
    m.entropy_nats_fw.resize(n);
    m.entropy_nats_base.resize(n);
    m.kl.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        rewards_fw[i] = freewill[i].reward;
        rewards_base[i] = baseline[i].reward;
        actions_fw[i] = freewill[i].action;
        actions_base[i] = baseline[i].action;
        m.entropy_bits_fw[i] = shannon_entropy(freewill[i].policy, EntropyBase::Bits);
        m.entropy_bits_base[i] = shannon_entropy(baseline[i].policy, EntropyBase::Bits);
        m.entropy_nats_fw[i] = shannon_entropy(freewill[i].policy, EntropyBase::Nats);
        m.entropy_nats_base[i] = shannon_entropy(baseline[i].policy, EntropyBase::Nats);
        m.kl[i] = kl_divergence(freewill[i].policy, baseline[i].policy);
    }
    m.rolling_reward_fw = moving_average(rewards_fw, window);
    m.rolling_reward_base = moving_average(rewards_base, window);
    m.novelty_fw = novelty_series(actions_fw, schedule.arm_count());
    m.novelty_base = novelty_series(actions_base, schedule.arm_count());
    m.regret_fw = cumulative_regret(freewill, schedule);
    m.regret_base = cumulative_regret(baseline, schedule);
    return m;
}

}  // namespace freewill
