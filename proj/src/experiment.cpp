#include "freewill/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "freewill/errors.hpp"

namespace freewill {

namespace {

constexpr std::uint64_t kBaseEnvSalt = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kFwSelectSalt = 0xD1B54A32D192ED03ULL;
constexpr std::uint64_t kBaseSelectSalt = 0x8CB92BA72F3D8DD7ULL;

}  // namespace

void ExperimentConfig::validate() const {
    if (schedule.phases().empty()) throw InvalidInput("config: schedule is empty");
    if (total_steps <= metrics_window)
        throw InvalidInput("config: total_steps must exceed metrics_window");
    if (metrics_window < 1) throw InvalidInput("config: metrics_window must be >= 1");
    if (seeds.empty()) throw InvalidInput("config: seeds must be non-empty");
    std::unordered_set<std::uint64_t> uniq(seeds.begin(), seeds.end());
    if (uniq.size() != seeds.size()) throw InvalidInput("config: seeds must be distinct");
    freewill.validate();
    baseline.validate();
}

std::pair<std::vector<double>, std::vector<double>> aggregate(
    const std::vector<std::vector<double>>& series_set) {
    if (series_set.empty()) throw InvalidInput("aggregate: no series");
    const std::size_t len = series_set.front().size();
    for (const auto& s : series_set)
        if (s.size() != len) throw InvalidInput("aggregate: ragged series lengths");

    const double n = static_cast<double>(series_set.size());
    std::vector<double> mean(len), stddev(len);
    std::vector<double> column(series_set.size());
    for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t r = 0; r < series_set.size(); ++r) column[r] = series_set[r][i];
        std::sort(column.begin(), column.end());
        double sum = 0.0;
        for (double v : column) sum += v;
        const double mu = sum / n;
        double sq = 0.0;
        for (double v : column) sq += (v - mu) * (v - mu);
        mean[i] = mu;
        stddev[i] = std::sqrt(sq / n);
    }
    return {std::move(mean), std::move(stddev)};
}

RunTrace run_single(const ExperimentConfig& config, std::uint64_t seed) {
    config.validate();

    BanditEnv fw_env(config.schedule, RngStream(seed));
    BanditEnv base_env(config.schedule, RngStream(seed ^ kBaseEnvSalt));
    RngStream fw_rng(seed ^ kFwSelectSalt);
    RngStream base_rng(seed ^ kBaseSelectSalt);

    FreeWillAgent fw(config.schedule.arm_count(), config.freewill);
    BaselineAgent base(config.schedule.arm_count(), config.baseline);

    std::vector<long> changes = config.schedule.change_steps();

    RunTrace trace;
    trace.seed = seed;
    trace.freewill.reserve(static_cast<std::size_t>(config.total_steps));
    trace.baseline.reserve(static_cast<std::size_t>(config.total_steps));

    for (long t = 0; t < config.total_steps; ++t) {
        const bool change = std::binary_search(changes.begin(), changes.end(), t);

        const Selection sel = fw.select(fw_rng);
        const int r_fw = fw_env.step(sel.action);
        fw.observe(sel.action, r_fw, change);
        trace.freewill.push_back({t, sel.action, r_fw, fw.last_policy(),
                                  fw.temperature(), fw.exploration_rate(),
                                  fw.last_psi_chosen()});

        const int a_base = base.select(base_rng);
        const int r_base = base_env.step(a_base);
        base.observe(a_base, r_base);
        trace.baseline.push_back({t, a_base, r_base, base.last_policy(), 0.0,
                                  base.exploration_rate(), 0.0});
    }
    return trace;
}

AggregateResult run_many(const ExperimentConfig& config, int jobs) {
    config.validate();
    const std::size_t n = config.seeds.size();

    std::vector<RunTrace> traces(n);
    std::vector<RunMetrics> metrics(n);

    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const std::size_t workers =
        std::min<std::size_t>(n, jobs > 0 ? static_cast<std::size_t>(jobs) : hw);

    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= n) return;
            try {
                traces[i] = run_single(config, config.seeds[i]);
                metrics[i] = compute_run_metrics(traces[i].freewill, traces[i].baseline,
                                                 config.schedule, config.metrics_window);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (std::thread& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    auto collect = [&](auto member) {
        std::vector<std::vector<double>> rows;
        rows.reserve(n);
        for (const RunMetrics& m : metrics) rows.push_back(m.*member);
        auto [mean, stddev] = aggregate(rows);
        return SeriesStats{std::move(mean), std::move(stddev)};
    };

    AggregateResult out;
    out.freewill.rolling_reward = collect(&RunMetrics::rolling_reward_fw);
    out.baseline.rolling_reward = collect(&RunMetrics::rolling_reward_base);
    out.freewill.entropy_bits = collect(&RunMetrics::entropy_bits_fw);
    out.baseline.entropy_bits = collect(&RunMetrics::entropy_bits_base);
    out.freewill.entropy_nats = collect(&RunMetrics::entropy_nats_fw);
    out.baseline.entropy_nats = collect(&RunMetrics::entropy_nats_base);
    out.kl = collect(&RunMetrics::kl);
    out.freewill.novelty = collect(&RunMetrics::novelty_fw);
    out.baseline.novelty = collect(&RunMetrics::novelty_base);
    out.freewill.regret = collect(&RunMetrics::regret_fw);
    out.baseline.regret = collect(&RunMetrics::regret_base);
    out.runs = std::move(traces);
    return out;
}

}  // namespace freewill
