#pragma once

#include <cstdint>
#include <stdexcept>

#include "mtrl/mdp.hpp"

namespace mtrl {

// thrown when first-passage value iteration diverges past the ceiling
struct InfiniteDiameterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// thrown when the deterministic-policy enumeration guard is exceeded
struct EnumerationGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PassageOptions {
    double tolerance = 1e-9;
    std::int64_t max_iterations = 1'000'000;
    double ceiling = 1e9;  // divergence cut-off for non-communicating models
};

// Diameter: max over ordered state pairs (s, s'), s != s', of the minimal
// expected first-passage time, by stochastic-shortest-path value iteration.
// Throws InfiniteDiameterError for non-communicating models.
double diameter(const MdpModel& model, const PassageOptions& opts = {});

// Hitting time: the same maximum taken over all deterministic stationary
// policies, each solved exactly as a linear first-passage system. Returns
// +infinity if some policy disconnects a pair. Guarded by A^S <= guard;
// beyond that the bound must be supplied externally as config.
double hitting_time_upper_bound(const MdpModel& model, std::int64_t guard = 1'000'000);

}  // namespace mtrl
