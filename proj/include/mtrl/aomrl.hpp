#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mtrl/counts.hpp"
#include "mtrl/mdp.hpp"
#include "mtrl/separability.hpp"
#include "mtrl/ucbvi.hpp"

namespace mtrl {

struct UndersampledGammaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Paired sample stores for one cluster: clustering-phase counts drive
// identification, learning-phase counts drive regret minimization. Counts
// only ever grow.
struct Cluster {
    EmpiricalCounts model_counts;
    EmpiricalCounts regret_counts;

    Cluster(int num_states, int num_actions)
        : model_counts(num_states, num_actions), regret_counts(num_states, num_actions) {}
};

struct ClusterStore {
    std::vector<Cluster> clusters;  // indices stable; new clusters appended

    int size() const { return static_cast<int>(clusters.size()); }
};

// Per-state view of a distinguishing set, for the exploration hot loop.
struct GammaIndex {
    int num_states = 0;
    std::vector<std::vector<int>> actions_by_state;
    std::vector<int> states_with_pairs;  // states owning at least one pair

    GammaIndex() = default;
    GammaIndex(const StateActionSet& gamma, int num_states, int num_actions);
};

// Exploration action choice: among this state's distinguishing actions still
// short of n_target, the most-visited one (ties to the smallest index);
// otherwise the action with the highest estimated probability of reaching a
// state that still owns an under-sampled pair (all-zero scores give action 0).
int explore_id(int state, const GammaIndex& gamma, const EmpiricalCounts& episode_counts,
               std::int64_t n_target);
int explore_id(int state, const StateActionSet& gamma, int num_states, int num_actions,
               const EmpiricalCounts& episode_counts, std::int64_t n_target);

// Scans clusters in index order; a cluster is rejected at the first
// distinguishing pair whose empirical rows differ by more than `threshold` in
// l1. Returns the 1-based index of the first surviving cluster, or 0 (new).
// Pairs with no samples on either side are never compared. With
// require_full_coverage, a distinguishing pair with zero episode samples
// raises UndersampledGammaError instead.
int identify_cluster(const EmpiricalCounts& episode_counts, const StateActionSet& gamma,
                     const ClusterStore& store, double threshold,
                     bool require_full_coverage = true);

struct AomrlConfig {
    int num_models = 1;           // M
    std::int64_t num_episodes = 1;  // K
    int num_states = 1;
    int num_actions = 1;
    std::int64_t horizon = 1;     // H, interaction steps per episode
    double dtilde = 1.0;
    double lam = 1.0;
    double alpha = 1.0;
    double failure_prob = 0.1;    // p
    StateActionSet gamma;
    std::optional<std::int64_t> h0_override;
    bool pool_learning_counts = false;  // plan from model+regret counts pooled
    double bonus_scale = 7.0;           // optimism bonus scale for the learning phase
    bool tight_value_cap = false;       // cap plan values at H - h instead of H

    double p1() const { return failure_prob / 3.0; }
    std::int64_t visit_target() const {  // N
        return required_visits(lam, num_states, p1(), num_episodes,
                               static_cast<std::int64_t>(gamma.size()));
    }
    std::int64_t clustering_steps() const {  // H0
        return h0_override ? *h0_override
                           : clustering_horizon(dtilde,
                                                static_cast<std::int64_t>(gamma.size()),
                                                visit_target());
    }
    std::int64_t learning_steps() const { return horizon - clustering_steps(); }
    double identify_threshold() const { return alpha - lam / 4.0; }

    void validate() const;
};

struct AomrlEpisodeResult {
    int cluster_id = 0;  // 1-based
    bool new_cluster = false;
    bool explored_ok = false;
    double realized_return = 0.0;
    int final_state = 0;
    std::int64_t interaction_steps = 0;
    int stage = 1;  // two-stage variant tags stage-2 episodes
    // empirical rows at the distinguishing pairs, for post-hoc verification:
    // the episode's own estimates and each pre-existing cluster's estimates
    // at identification time
    std::vector<std::vector<double>> episode_gamma_rows;
    std::vector<std::vector<std::vector<double>>> cluster_gamma_rows;
};

// The cluster-then-learn episode loop: explore the distinguishing pairs for
// H0 steps, identify (or create) the cluster, then run the optimistic planner
// off the cluster's learning-phase counts for the remaining H - H0 steps.
class AomrlAgent {
public:
    explicit AomrlAgent(AomrlConfig cfg);

    AomrlEpisodeResult run_episode(const MdpModel& env, int start, Rng& rng);

    const ClusterStore& store() const { return store_; }
    const AomrlConfig& config() const { return cfg_; }

private:
    AomrlConfig cfg_;
    GammaIndex gamma_index_;
    ClusterStore store_;
    double log_constant_ = 0.0;
};

struct UnknownGammaConfig {
    int num_models = 2;       // M >= 2
    std::int64_t num_episodes = 2;
    int num_states = 1;
    int num_actions = 1;
    std::int64_t stage1_learning_horizon = 0;  // H1 during stage 1 (0: clustering only)
    std::int64_t stage2_learning_horizon = 1;
    double dtilde = 1.0;
    double lam = 1.0;
    double failure_prob = 0.1;
    std::optional<std::int64_t> stage1_h0_override;
    std::optional<std::int64_t> stage2_h0_override;
    bool pool_learning_counts = false;
    double bonus_scale = 7.0;
    bool tight_value_cap = false;

    void validate() const;
};

// Two-stage variant for unknown distinguishing sets: stage 1 clusters with
// the full state-action set until M clusters exist, extracts a candidate set
// from the cluster estimates (first pair over 3*lam/4 per cluster pair, in
// lexicographic order), then stage 2 restarts the loop on that set.
class AomrlUnknownGammaAgent {
public:
    explicit AomrlUnknownGammaAgent(UnknownGammaConfig cfg);

    AomrlEpisodeResult run_episode(const MdpModel& env, int start, Rng& rng);

    bool in_stage2() const { return stage2_.has_value(); }
    const StateActionSet& gamma_hat() const;
    const AomrlAgent& stage1_agent() const { return stage1_; }
    const AomrlAgent& stage2_agent() const;
    // cluster store the most recent episode's cluster_id refers to
    const ClusterStore& last_episode_store() const;
    int episodes_run() const { return episodes_run_; }

private:
    UnknownGammaConfig cfg_;
    AomrlAgent stage1_;
    std::optional<AomrlAgent> stage2_;
    StateActionSet gamma_hat_;
    int episodes_run_ = 0;
    bool last_was_stage2_ = false;
};

}  // namespace mtrl
