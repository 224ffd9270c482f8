#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mtrl/mdp.hpp"

namespace mtrl {

// Finite-horizon backward induction. Returns the optimal value table
// ((H+1) x S, terminal row zero) and the greedy nonstationary policy.
// Argmax ties break to the smallest action index.
std::pair<ValueTable, NonstationaryPolicy> optimal_value_and_policy(const MdpModel& model,
                                                                    int horizon);

// Optimal value at the first step only, with O(S) memory; usable for horizons
// far beyond what a full value table could hold.
std::vector<double> optimal_start_values(const MdpModel& model, std::int64_t horizon);

// Exact expected H-step return of a fixed nonstationary policy from `start`,
// computed by forward propagation of the state distribution.
double evaluate_policy(const MdpModel& model, const NonstationaryPolicy& policy, int start);

// Exact expected return of the uniform-random policy (mixes all actions
// with equal weight at every step).
double evaluate_uniform_random(const MdpModel& model, int horizon, int start);

}  // namespace mtrl
