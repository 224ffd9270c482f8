#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mtrl/counts.hpp"
#include "mtrl/dp.hpp"
#include "mtrl/mdp.hpp"
#include "mtrl/trace.hpp"

namespace mtrl {

enum class LogConstantVariant { single_task, multi_task, external_samples };

// ln(5*S*A*K*H/p), with M multiplying the argument for the multi-task variant
// and H replaced by H+N for the external-samples variant.
double ucbvi_log_constant(LogConstantVariant variant, int num_states, int num_actions,
                          std::int64_t episodes, std::int64_t horizon, int num_models, double p,
                          std::int64_t n_external = 0);

struct UcbviPlan {
    int horizon = 0;
    int num_states = 0;
    int num_actions = 0;
    std::vector<double> q;  // row-major [h][s][a]
    NonstationaryPolicy policy;

    double q_at(int h, int s, int a) const {
        return q[(static_cast<std::size_t>(h) * num_states + s) * num_actions + a];
    }
    // optimistic state value at step h (max_a Q)
    double value_at(int h, int s) const;
};

// Optimistic backward induction: Q[h](s,a) = min{H, r + P_hat V[h+1] + b} with
// b = bonus_scale * H * L / sqrt(N(s,a)), and Q = H where N(s,a) = 0. Greedy
// policy with smallest-index ties. With tight_value_cap the cap (and the
// unvisited-pair value) is H - h instead of H; since no policy can collect
// more than H - h reward from step h, this keeps the plan optimistic while
// letting saturated values separate much sooner.
UcbviPlan ucbvi_plan(const EmpiricalCounts& counts, int horizon, const RewardTable& reward,
                     double log_constant, double bonus_scale = 7.0,
                     bool tight_value_cap = false);

// Plain certainty-equivalent planning on the empirical estimate: no bonus, no
// clipping; unvisited rows contribute zero future value. Used by the
// evaluation protocol.
std::pair<ValueTable, NonstationaryPolicy> estimate_greedy_policy(const EmpiricalCounts& counts,
                                                                  const RewardTable& reward,
                                                                  int horizon);

struct UcbviEpisodeResult {
    double realized_return = 0.0;
    double optimistic_value = 0.0;  // planner's value at the initial state
    EpisodeTrace trace;
};

// Single-task optimistic agent: replans from all accumulated counts at the
// start of each episode, then acts greedily.
class UcbviAgent {
public:
    UcbviAgent(int num_states, int num_actions, std::int64_t episodes, std::int64_t horizon,
               double failure_prob, double bonus_scale = 7.0, bool tight_value_cap = false);

    // acts for `steps` steps (defaults to the full horizon; never more)
    UcbviEpisodeResult run_episode(const MdpModel& env, int start, Rng& rng,
                                   std::int64_t steps = -1);

    const EmpiricalCounts& counts() const { return counts_; }
    void reset_counts() { counts_ = EmpiricalCounts(counts_.num_states, counts_.num_actions); }

private:
    EmpiricalCounts counts_;
    std::int64_t horizon_;
    double log_constant_;
    double bonus_scale_;
    bool tight_value_cap_;
};

// Variant fed N fresh oracle draws per state-action pair per episode; plans
// on the pooled counts with the enlarged log constant. With N = 0 the
// behaviour is identical to UcbviAgent under the same random stream.
class ExternalSamplesUcbviAgent {
public:
    ExternalSamplesUcbviAgent(int num_states, int num_actions, std::int64_t episodes,
                              std::int64_t horizon, double failure_prob,
                              std::int64_t samples_per_pair, double bonus_scale = 7.0,
                              bool tight_value_cap = false);

    // oracle_rng drives the external draws; rng drives the interaction
    UcbviEpisodeResult run_episode(const MdpModel& env, int start, Rng& rng, Rng& oracle_rng);

    const UcbviPlan& last_plan() const { return last_plan_; }

private:
    EmpiricalCounts interaction_counts_;
    EmpiricalCounts external_counts_;
    std::int64_t horizon_;
    std::int64_t samples_per_pair_;
    double log_constant_;
    double bonus_scale_;
    bool tight_value_cap_;
    UcbviPlan last_plan_;
};

}  // namespace mtrl
