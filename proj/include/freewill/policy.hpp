#pragma once

#include <cstddef>
#include <vector>

#include "freewill/rng.hpp"

namespace freewill {

// Probability vector over arms. Entries are non-negative and sum to one
// within 1e-9; the agent samples its action from it.
struct PolicyDistribution {
    std::vector<double> probs;

    std::size_t size() const { return probs.size(); }
    double operator[](std::size_t i) const { return probs[i]; }

    // Throws InvalidInput when the invariants do not hold.
    void validate() const;
};

// Numerically safe softmax: the running maximum is subtracted before
// exponentiation, so arbitrarily large finite scores cannot overflow.
PolicyDistribution softmax(const std::vector<double>& scores);

// Samples an index distributed per `dist`. Consumes exactly one draw.
int sample_categorical(const PolicyDistribution& dist, RngStream& rng);

// Binary reward coin: 1 with probability p. Consumes exactly one draw.
int bernoulli(double p, RngStream& rng);

}  // namespace freewill
