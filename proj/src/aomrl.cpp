#include "mtrl/aomrl.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mtrl {

GammaIndex::GammaIndex(const StateActionSet& gamma, int num_states, int num_actions)
    : num_states(num_states), actions_by_state(num_states) {
    for (const auto& [s, a] : gamma.pairs) {
        if (s < 0 || s >= num_states || a < 0 || a >= num_actions)
            throw std::out_of_range("GammaIndex: pair out of range");
        actions_by_state[s].push_back(a);
    }
    for (int s = 0; s < num_states; ++s)
        if (!actions_by_state[s].empty()) states_with_pairs.push_back(s);
}

int explore_id(int state, const GammaIndex& gamma, const EmpiricalCounts& episode_counts,
               std::int64_t n_target) {
    // first branch: an under-sampled distinguishing action at the current state
    {
        std::int64_t best_count = -1;
        int best_action = -1;
        for (int a : gamma.actions_by_state[state]) {
            const std::int64_t n = episode_counts.pair_count(state, a);
            if (n < n_target && n > best_count) {
                best_count = n;
                best_action = a;
            }
        }
        if (best_action >= 0) return best_action;
    }

    // otherwise: chase the states that still own under-sampled pairs, scored
    // by this episode's empirical transition estimate
    std::vector<int> under_states;
    for (int s2 : gamma.states_with_pairs) {
        for (int a : gamma.actions_by_state[s2]) {
            if (episode_counts.pair_count(s2, a) < n_target) {
                under_states.push_back(s2);
                break;
            }
        }
    }
    double best_score = 0.0;
    int best_action = 0;
    for (int a = 0; a < episode_counts.num_actions; ++a) {
        const std::int64_t n = episode_counts.pair_count(state, a);
        if (n <= 0) continue;
        double score = 0.0;
        for (int s2 : under_states)
            score += static_cast<double>(episode_counts.triple_count(state, a, s2));
        score /= static_cast<double>(n);
        if (score > best_score) {
            best_score = score;
            best_action = a;
        }
    }
    return best_action;
}

int explore_id(int state, const StateActionSet& gamma, int num_states, int num_actions,
               const EmpiricalCounts& episode_counts, std::int64_t n_target) {
    return explore_id(state, GammaIndex(gamma, num_states, num_actions), episode_counts,
                      n_target);
}

int identify_cluster(const EmpiricalCounts& episode_counts, const StateActionSet& gamma,
                     const ClusterStore& store, double threshold, bool require_full_coverage) {
    if (require_full_coverage)
        for (const auto& [s, a] : gamma.pairs)
            if (episode_counts.pair_count(s, a) == 0)
                throw UndersampledGammaError("identify_cluster: pair (" + std::to_string(s) +
                                             "," + std::to_string(a) +
                                             ") has no episode samples");

    for (int c = 0; c < store.size(); ++c) {
        const auto& cluster = store.clusters[c];
        bool rejected = false;
        for (const auto& [s, a] : gamma.pairs) {
            if (episode_counts.pair_count(s, a) == 0 ||
                cluster.model_counts.pair_count(s, a) == 0)
                continue;  // all-zero rows are never compared
            const auto pc = cluster.model_counts.estimate_row(s, a);
            const auto pk = episode_counts.estimate_row(s, a);
            if (l1_distance(pc, pk) > threshold) {
                rejected = true;
                break;
            }
        }
        if (!rejected) return c + 1;
    }
    return 0;
}

void AomrlConfig::validate() const {
    if (num_models < 1 || num_episodes < 1 || num_states < 1 || num_actions < 1)
        throw std::invalid_argument("AomrlConfig: positive dimensions required");
    if (lam <= 0.0 || lam > 2.0) throw std::invalid_argument("AomrlConfig: lam in (0, 2]");
    if (alpha < lam / 2.0)
        throw std::invalid_argument("AomrlConfig: alpha must be at least lam/2");
    if (failure_prob <= 0.0 || failure_prob >= 1.0)
        throw std::invalid_argument("AomrlConfig: failure probability in (0, 1)");
    if (bonus_scale <= 0.0)
        throw std::invalid_argument("AomrlConfig: bonus scale must be positive");
    if (gamma.empty()) throw std::invalid_argument("AomrlConfig: distinguishing set is empty");
    for (const auto& [s, a] : gamma.pairs)
        if (s >= num_states || a >= num_actions)
            throw std::invalid_argument("AomrlConfig: distinguishing pair out of range");
    if (horizon < clustering_steps())
        throw std::invalid_argument("AomrlConfig: horizon shorter than the clustering phase (" +
                                    std::to_string(clustering_steps()) + " steps)");
}

AomrlAgent::AomrlAgent(AomrlConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    gamma_index_ = GammaIndex(cfg_.gamma, cfg_.num_states, cfg_.num_actions);
    const std::int64_t h1 = std::max<std::int64_t>(cfg_.learning_steps(), 1);
    log_constant_ = ucbvi_log_constant(LogConstantVariant::multi_task, cfg_.num_states,
                                       cfg_.num_actions, cfg_.num_episodes, h1, cfg_.num_models,
                                       cfg_.p1());
}

AomrlEpisodeResult AomrlAgent::run_episode(const MdpModel& env, int start, Rng& rng) {
    const std::int64_t h0 = cfg_.clustering_steps();
    const std::int64_t h1 = cfg_.learning_steps();
    const std::int64_t n_target = cfg_.visit_target();

    AomrlEpisodeResult result;
    EmpiricalCounts episode_counts(cfg_.num_states, cfg_.num_actions);
    int s = start;
    for (std::int64_t h = 0; h < h0; ++h) {
        const int a = explore_id(s, gamma_index_, episode_counts, n_target);
        result.realized_return += env.reward.at(s, a);
        const int s2 = sample_transition(env, s, a, rng);
        episode_counts.record(s, a, s2);
        s = s2;
    }

    result.explored_ok = true;
    for (const auto& [gs, ga] : cfg_.gamma.pairs)
        if (episode_counts.pair_count(gs, ga) < n_target) {
            result.explored_ok = false;
            break;
        }

    for (const auto& [gs, ga] : cfg_.gamma.pairs)
        result.episode_gamma_rows.push_back(episode_counts.estimate_row(gs, ga));
    for (const auto& cluster : store_.clusters) {
        auto& rows = result.cluster_gamma_rows.emplace_back();
        for (const auto& [gs, ga] : cfg_.gamma.pairs)
            rows.push_back(cluster.model_counts.estimate_row(gs, ga));
    }

    int id = identify_cluster(episode_counts, cfg_.gamma, store_, cfg_.identify_threshold(),
                              /*require_full_coverage=*/false);
    if (id == 0) {
        store_.clusters.emplace_back(cfg_.num_states, cfg_.num_actions);
        store_.clusters.back().model_counts.merge(episode_counts);
        id = store_.size();
        result.new_cluster = true;
    } else {
        store_.clusters[id - 1].model_counts.merge(episode_counts);
    }
    result.cluster_id = id;

    if (h1 > 0) {
        Cluster& cluster = store_.clusters[id - 1];
        const EmpiricalCounts* plan_counts = &cluster.regret_counts;
        EmpiricalCounts pooled(cfg_.num_states, cfg_.num_actions);
        if (cfg_.pool_learning_counts) {
            pooled = cluster.model_counts;
            pooled.merge(cluster.regret_counts);
            plan_counts = &pooled;
        }
        const UcbviPlan plan = ucbvi_plan(*plan_counts, static_cast<int>(h1), env.reward,
                                          log_constant_, cfg_.bonus_scale,
                                          cfg_.tight_value_cap);
        for (std::int64_t h = 0; h < h1; ++h) {
            const int a = plan.policy.at(static_cast<int>(h), s);
            result.realized_return += env.reward.at(s, a);
            const int s2 = sample_transition(env, s, a, rng);
            cluster.regret_counts.record(s, a, s2);
            s = s2;
        }
    }
    result.final_state = s;
    result.interaction_steps = h0 + h1;
    return result;
}

void UnknownGammaConfig::validate() const {
    if (num_models < 2)
        throw std::invalid_argument("UnknownGammaConfig: at least two models required");
    if (num_episodes < num_models)
        throw std::invalid_argument("UnknownGammaConfig: fewer episodes than models");
    if (lam <= 0.0 || lam > 2.0) throw std::invalid_argument("UnknownGammaConfig: lam in (0, 2]");
    if (failure_prob <= 0.0 || failure_prob >= 1.0)
        throw std::invalid_argument("UnknownGammaConfig: failure probability in (0, 1)");
    if (stage1_learning_horizon < 0 || stage2_learning_horizon < 0)
        throw std::invalid_argument("UnknownGammaConfig: learning horizons must be >= 0");
}

namespace {

AomrlConfig stage1_config(const UnknownGammaConfig& cfg) {
    AomrlConfig c;
    c.num_models = cfg.num_models;
    c.num_episodes = cfg.num_episodes;
    c.num_states = cfg.num_states;
    c.num_actions = cfg.num_actions;
    c.dtilde = cfg.dtilde;
    c.lam = cfg.lam;
    c.alpha = cfg.lam;
    c.failure_prob = cfg.failure_prob;
    c.gamma = StateActionSet::full(cfg.num_states, cfg.num_actions);
    c.h0_override = cfg.stage1_h0_override;
    c.pool_learning_counts = cfg.pool_learning_counts;
    c.bonus_scale = cfg.bonus_scale;
    c.tight_value_cap = cfg.tight_value_cap;
    c.horizon = c.clustering_steps() + cfg.stage1_learning_horizon;
    return c;
}

}  // namespace

AomrlUnknownGammaAgent::AomrlUnknownGammaAgent(UnknownGammaConfig cfg)
    : cfg_((cfg.validate(), std::move(cfg))), stage1_(stage1_config(cfg_)) {}

const StateActionSet& AomrlUnknownGammaAgent::gamma_hat() const {
    if (!stage2_) throw std::logic_error("gamma_hat: stage 1 still running");
    return gamma_hat_;
}

const AomrlAgent& AomrlUnknownGammaAgent::stage2_agent() const {
    if (!stage2_) throw std::logic_error("stage2_agent: stage 1 still running");
    return *stage2_;
}

const ClusterStore& AomrlUnknownGammaAgent::last_episode_store() const {
    return last_was_stage2_ ? stage2_->store() : stage1_.store();
}

AomrlEpisodeResult AomrlUnknownGammaAgent::run_episode(const MdpModel& env, int start, Rng& rng) {
    ++episodes_run_;
    if (stage2_) {
        last_was_stage2_ = true;
        AomrlEpisodeResult result = stage2_->run_episode(env, start, rng);
        result.stage = 2;
        return result;
    }

    last_was_stage2_ = false;
    AomrlEpisodeResult result = stage1_.run_episode(env, start, rng);
    if (stage1_.store().size() > cfg_.num_models)
        throw std::runtime_error(
            "AomrlUnknownGammaAgent: stage 1 created more clusters than models (" +
            std::to_string(stage1_.store().size()) + " > " +
            std::to_string(cfg_.num_models) + ")");

    if (stage1_.store().size() == cfg_.num_models) {
        // extract the candidate distinguishing set from the cluster estimates
        const auto& clusters = stage1_.store().clusters;
        for (int i = 0; i < cfg_.num_models; ++i) {
            for (int j = i + 1; j < cfg_.num_models; ++j) {
                bool found = false;
                for (int s = 0; s < cfg_.num_states && !found; ++s) {
                    for (int a = 0; a < cfg_.num_actions && !found; ++a) {
                        const auto pi = clusters[i].model_counts.estimate_row(s, a);
                        const auto pj = clusters[j].model_counts.estimate_row(s, a);
                        if (l1_distance(pi, pj) > 3.0 * cfg_.lam / 4.0) {
                            gamma_hat_.insert(s, a);
                            found = true;
                        }
                    }
                }
                if (!found)
                    throw std::runtime_error(
                        "AomrlUnknownGammaAgent: no pair separates clusters " +
                        std::to_string(i) + " and " + std::to_string(j) +
                        " at 3*lam/4; estimates too coarse");
            }
        }
        AomrlConfig c;
        c.num_models = cfg_.num_models;
        c.num_episodes = cfg_.num_episodes;
        c.num_states = cfg_.num_states;
        c.num_actions = cfg_.num_actions;
        c.dtilde = cfg_.dtilde;
        c.lam = cfg_.lam;
        c.alpha = cfg_.lam / 2.0;
        c.failure_prob = cfg_.failure_prob;
        c.gamma = gamma_hat_;
        c.h0_override = cfg_.stage2_h0_override;
        c.pool_learning_counts = cfg_.pool_learning_counts;
        c.bonus_scale = cfg_.bonus_scale;
        c.tight_value_cap = cfg_.tight_value_cap;
        c.horizon = c.clustering_steps() + cfg_.stage2_learning_horizon;
        stage2_.emplace(c);
    } else if (episodes_run_ >= static_cast<int>(cfg_.num_episodes)) {
        throw std::runtime_error("AomrlUnknownGammaAgent: stage 1 exhausted all " +
                                 std::to_string(cfg_.num_episodes) + " episodes with only " +
                                 std::to_string(stage1_.store().size()) + " clusters");
    }
    return result;
}

}  // namespace mtrl
