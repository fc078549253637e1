#include "freewill/agent.hpp"

#include <algorithm>
#include <cmath>

#include "freewill/errors.hpp"

namespace freewill {

namespace {

double max_of_row(const std::unordered_map<long, std::vector<double>>& table, long state) {
    auto it = table.find(state);
    if (it == table.end() || it->second.empty()) return 0.0;
    return *std::max_element(it->second.begin(), it->second.end());
}

template <typename T>
std::vector<T>& ensure_row(std::unordered_map<long, std::vector<T>>& table, long state,
                           int n) {
    auto it = table.find(state);
    if (it == table.end())
        it = table.emplace(state, std::vector<T>(static_cast<std::size_t>(n), T{})).first;
    return it->second;
}

int argmax_lowest(const std::vector<double>& v) {
    return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

void FreeWillParams::validate() const {
    if (!(t_min > 0.0 && t_min <= t_init && t_init <= t_max))
        throw InvalidInput("params: need 0 < t_min <= t_init <= t_max");
    if (!(gamma_inc > 1.0)) throw InvalidInput("params: gamma_inc must be > 1");
    if (!(gamma_dec > 0.0 && gamma_dec < 1.0))
        throw InvalidInput("params: gamma_dec must be in (0, 1)");
    if (!(discount >= 0.0 && discount < 1.0))
        throw InvalidInput("params: discount must be in [0, 1)");
    if (!(eps_floor >= 0.0 && eps_floor <= eps_init && eps_init <= 1.0))
        throw InvalidInput("params: need 0 <= eps_floor <= eps_init <= 1");
    if (!(alpha >= 0.0)) throw InvalidInput("params: alpha must be >= 0");
    if (!(eta > 0.0)) throw InvalidInput("params: eta must be > 0");
    if (!(tau >= 0.0)) throw InvalidInput("params: tau must be >= 0");
    if (surprise_window < 1) throw InvalidInput("params: surprise_window must be >= 1");
    if (!(eps_decay >= 0.0)) throw InvalidInput("params: eps_decay must be >= 0");
}

void BaselineParams::validate() const {
    if (!(eta > 0.0)) throw InvalidInput("baseline params: eta must be > 0");
    if (!(discount >= 0.0 && discount < 1.0))
        throw InvalidInput("baseline params: discount must be in [0, 1)");
    if (!(eps_floor >= 0.0 && eps_floor <= eps_init && eps_init <= 1.0))
        throw InvalidInput("baseline params: need 0 <= eps_floor <= eps_init <= 1");
    if (!(eps_decay >= 0.0)) throw InvalidInput("baseline params: eps_decay must be >= 0");
}

double intrinsic_bonus(long n) {
    if (n < 0) throw InvalidInput("intrinsic_bonus: negative visit count");
    return 1.0 / std::sqrt(1.0 + static_cast<double>(n));
}

std::vector<double> action_scores(const std::vector<double>& q_row,
                                  const std::vector<long>& n_row, double temperature,
                                  double alpha, ScoreVariant variant) {
    if (q_row.size() != n_row.size())
        throw InvalidInput("action_scores: q_row and n_row lengths differ");
    if (!(temperature > 0.0)) throw InvalidInput("action_scores: temperature must be > 0");
    std::vector<double> scores(q_row.size());
    for (std::size_t i = 0; i < q_row.size(); ++i) {
        const double bonus = intrinsic_bonus(n_row[i]);
        scores[i] = variant == ScoreVariant::Formula
                        ? (q_row[i] + alpha * bonus) / temperature
                        : q_row[i] + temperature * alpha * bonus;
    }
    return scores;
}

double surprise(double reward, const std::deque<double>& history) {
    if (history.empty()) return 0.0;
    double sum = 0.0;
    for (double r : history) sum += r;
    return std::abs(reward - sum / static_cast<double>(history.size()));
}

double temperature_update(double temperature, double surprise_value,
                          const FreeWillParams& p) {
    if (surprise_value > p.tau) return std::min(p.t_max, temperature * p.gamma_inc);
    return std::max(p.t_min, temperature * p.gamma_dec);
}

std::vector<double> psi_update(const std::vector<double>& psi_row, int chosen,
                               double reward, const std::vector<double>& bonus_row,
                               const FreeWillParams& p) {
    if (psi_row.size() != bonus_row.size())
        throw InvalidInput("psi_update: psi_row and bonus_row lengths differ");
    if (chosen < 0 || static_cast<std::size_t>(chosen) >= psi_row.size())
        throw InvalidInput("psi_update: chosen action out of range");
    std::vector<double> out(psi_row.size());
    for (std::size_t i = 0; i < psi_row.size(); ++i) {
        const double drive = (static_cast<int>(i) == chosen ? reward : 0.0) +
                             p.alpha * bonus_row[i];
        out[i] = psi_row[i] + p.eta * (drive - psi_row[i]);
    }
    return out;
}

PolicyDistribution baseline_policy_distribution(const std::vector<double>& q_row,
                                                double eps) {
    if (q_row.empty()) throw InvalidInput("baseline policy: empty value row");
    if (!(eps >= 0.0 && eps <= 1.0))
        throw InvalidInput("baseline policy: eps must be in [0, 1]");
    PolicyDistribution pol;
    pol.probs.assign(q_row.size(), eps / static_cast<double>(q_row.size()));
    pol.probs[static_cast<std::size_t>(argmax_lowest(q_row))] += 1.0 - eps;
    return pol;
}

FreeWillAgent::FreeWillAgent(int num_arms, FreeWillParams params)
    : num_arms_(num_arms), params_(params) {
    if (num_arms < 1) throw InvalidInput("agent: need at least one arm");
    params_.validate();
    temperature_ = params_.t_init;
    eps_ = params_.eps_init;
    snapshot_policy_ = policy_for(current_state());
}

long FreeWillAgent::current_state() const {
    return params_.state_mode == StateMode::Single ? 0 : step_;
}

long FreeWillAgent::next_state() const {
    return params_.state_mode == StateMode::Single ? 0 : step_ + 1;
}

PolicyDistribution FreeWillAgent::policy_for(long state) const {
    const std::vector<double> zeros_q(static_cast<std::size_t>(num_arms_), 0.0);
    const std::vector<long> zeros_n(static_cast<std::size_t>(num_arms_), 0L);
    auto qi = q_.find(state);
    auto ni = n_.find(state);
    const std::vector<double>& q = qi == q_.end() ? zeros_q : qi->second;
    const std::vector<long>& n = ni == n_.end() ? zeros_n : ni->second;
    return softmax(action_scores(q, n, temperature_, params_.alpha, params_.score_variant));
}

Selection FreeWillAgent::select(RngStream& rng) const {
    PolicyDistribution pol = policy_for(current_state());
    const double coin = rng.next_double();
    int action;
    if (coin < eps_) {
        action = rng.uniform_index(num_arms_);
    } else {
        action = sample_categorical(pol, rng);
    }
    return {action, std::move(pol)};
}

void FreeWillAgent::observe(int action, int reward, bool change_signal) {
    if (action < 0 || action >= num_arms_)
        throw InvalidInput("agent: observed action out of range");
    const long state = current_state();
    const long next = next_state();

    rewards_.push_back(static_cast<double>(reward));
    if (static_cast<int>(rewards_.size()) > params_.surprise_window) rewards_.pop_front();
    const double surp = surprise(static_cast<double>(reward), rewards_);

    temperature_ = temperature_update(temperature_, surp, params_);
    const bool reset =
        params_.trigger_variant == TriggerVariant::Oracle && change_signal;
    if (reset) temperature_ = params_.t_init;

    const double next_max = max_of_row(q_, next);

    std::vector<double>& q = ensure_row(q_, state, num_arms_);
    q[static_cast<std::size_t>(action)] +=
        params_.eta * (static_cast<double>(reward) + params_.discount * next_max -
                       q[static_cast<std::size_t>(action)]);

    std::vector<long>& n = ensure_row(n_, state, num_arms_);
    n[static_cast<std::size_t>(action)] += 1;

    std::vector<double> bonus(static_cast<std::size_t>(num_arms_));
    for (int a = 0; a < num_arms_; ++a)
        bonus[static_cast<std::size_t>(a)] = intrinsic_bonus(n[static_cast<std::size_t>(a)]);
    std::vector<double>& psi = ensure_row(psi_, state, num_arms_);
    psi = psi_update(psi, action, static_cast<double>(reward), bonus, params_);

    if (reset) {
        eps_ = params_.eps_init;
    } else {
        eps_ = std::max(params_.eps_floor, eps_ - params_.eps_decay);
    }

    snapshot_policy_ = policy_for(state);
    snapshot_psi_chosen_ = psi[static_cast<std::size_t>(action)];
    ++step_;
}

long FreeWillAgent::visits(long state, int action) const {
    auto it = n_.find(state);
    return it == n_.end() ? 0 : it->second[static_cast<std::size_t>(action)];
}

double FreeWillAgent::q_value(long state, int action) const {
    auto it = q_.find(state);
    return it == q_.end() ? 0.0 : it->second[static_cast<std::size_t>(action)];
}

double FreeWillAgent::psi_value(long state, int action) const {
    auto it = psi_.find(state);
    return it == psi_.end() ? 0.0 : it->second[static_cast<std::size_t>(action)];
}

BaselineAgent::BaselineAgent(int num_arms, BaselineParams params)
    : num_arms_(num_arms), params_(params) {
    if (num_arms < 1) throw InvalidInput("baseline: need at least one arm");
    params_.validate();
    eps_ = params_.eps_init;
    const std::vector<double> zeros(static_cast<std::size_t>(num_arms_), 0.0);
    snapshot_policy_ = baseline_policy_distribution(zeros, eps_);
}

int BaselineAgent::select(RngStream& rng) const {
    const double coin = rng.next_double();
    if (coin < eps_) return rng.uniform_index(num_arms_);
    auto it = q_.find(step_);
    if (it == q_.end()) return 0;  // fresh zero row, ties break to arm 0
    return argmax_lowest(it->second);
}

void BaselineAgent::observe(int action, int reward) {
    if (action < 0 || action >= num_arms_)
        throw InvalidInput("baseline: observed action out of range");
    const double next_max = max_of_row(q_, step_ + 1);

    std::vector<double>& q = ensure_row(q_, step_, num_arms_);
    q[static_cast<std::size_t>(action)] +=
        params_.eta * (static_cast<double>(reward) + params_.discount * next_max -
                       q[static_cast<std::size_t>(action)]);
    eps_ = std::max(params_.eps_floor, eps_ - params_.eps_decay);
    snapshot_policy_ = baseline_policy_distribution(q, eps_);
    ++step_;
}

double BaselineAgent::q_value(long state, int action) const {
    auto it = q_.find(state);
    return it == q_.end() ? 0.0 : it->second[static_cast<std::size_t>(action)];
}

}  // namespace freewill
