#include "freewill/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "freewill/errors.hpp"

namespace freewill {

void PolicyDistribution::validate() const {
    if (probs.empty()) throw InvalidInput("policy: empty distribution");
    double sum = 0.0;
    for (double p : probs) {
        if (!std::isfinite(p) || p < 0.0)
            throw InvalidInput("policy: entries must be finite and >= 0");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw InvalidInput("policy: entries sum to " + std::to_string(sum) +
                           ", expected 1 within 1e-9");
}

PolicyDistribution softmax(const std::vector<double>& scores) {
    if (scores.empty()) throw InvalidInput("softmax: empty score vector");
    for (double s : scores)
        if (!std::isfinite(s)) throw InvalidInput("softmax: non-finite score");

    const double hi = *std::max_element(scores.begin(), scores.end());
    PolicyDistribution out;
    out.probs.resize(scores.size());
    double total = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out.probs[i] = std::exp(scores[i] - hi);
        total += out.probs[i];
    }
    for (double& p : out.probs) p /= total;
    return out;
}

int sample_categorical(const PolicyDistribution& dist, RngStream& rng) {
    dist.validate();
    const double u = rng.next_double();
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.probs.size(); ++i) {
        acc += dist.probs[i];
        if (u < acc) return static_cast<int>(i);
    }
    // u landed in the sub-1e-9 rounding tail; by convention it belongs to
    // the last arm.
    return static_cast<int>(dist.probs.size()) - 1;
}

int bernoulli(double p, RngStream& rng) {
    if (!(p >= 0.0 && p <= 1.0))
        throw InvalidInput("bernoulli: p must be in [0, 1]");
    return rng.next_double() < p ? 1 : 0;
}

}  // namespace freewill
