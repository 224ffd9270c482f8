#include "mtrl/ucbvi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mtrl {

double ucbvi_log_constant(LogConstantVariant variant, int num_states, int num_actions,
                          std::int64_t episodes, std::int64_t horizon, int num_models, double p,
                          std::int64_t n_external) {
    if (num_states < 1 || num_actions < 1 || episodes < 1 || horizon < 1 || num_models < 1)
        throw std::invalid_argument("ucbvi_log_constant: positive arguments required");
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("ucbvi_log_constant: p in (0, 1)");
    double arg = 5.0 * num_states * num_actions * static_cast<double>(episodes);
    switch (variant) {
        case LogConstantVariant::single_task:
            arg *= static_cast<double>(horizon);
            break;
        case LogConstantVariant::multi_task:
            arg *= static_cast<double>(horizon) * num_models;
            break;
        case LogConstantVariant::external_samples:
            arg *= static_cast<double>(horizon + n_external);
            break;
    }
    return std::log(arg / p);
}

double UcbviPlan::value_at(int h, int s) const {
    double best = 0.0;
    for (int a = 0; a < num_actions; ++a) best = std::max(best, q_at(h, s, a));
    return best;
}

UcbviPlan ucbvi_plan(const EmpiricalCounts& counts, int horizon, const RewardTable& reward,
                     double log_constant, double bonus_scale, bool tight_value_cap) {
    if (horizon < 1) throw std::invalid_argument("ucbvi_plan: horizon must be >= 1");
    if (log_constant <= 0.0) throw std::invalid_argument("ucbvi_plan: log constant must be > 0");
    const int S = counts.num_states;
    const int A = counts.num_actions;
    const double hval = static_cast<double>(horizon);

    UcbviPlan plan;
    plan.horizon = horizon;
    plan.num_states = S;
    plan.num_actions = A;
    plan.q.assign(static_cast<std::size_t>(horizon) * S * A, 0.0);
    plan.policy = NonstationaryPolicy(horizon, S);

    std::vector<double> v(S, 0.0), v_next(S, 0.0);
    for (int h = horizon - 1; h >= 0; --h) {
        const double cap = tight_value_cap ? static_cast<double>(horizon - h) : hval;
        for (int s = 0; s < S; ++s) {
            double best = -1.0;
            int best_action = 0;
            for (int a = 0; a < A; ++a) {
                const std::int64_t n = counts.pair_count(s, a);
                double qv;
                if (n > 0) {
                    double future = 0.0;
                    const double inv = 1.0 / static_cast<double>(n);
                    for (int s2 = 0; s2 < S; ++s2) {
                        const std::int64_t c = counts.triple_count(s, a, s2);
                        if (c > 0) future += static_cast<double>(c) * inv * v_next[s2];
                    }
                    const double bonus = bonus_scale * hval * log_constant /
                                         std::sqrt(static_cast<double>(n));
                    qv = std::min(cap, reward.at(s, a) + future + bonus);
                } else {
                    qv = cap;
                }
                plan.q[(static_cast<std::size_t>(h) * S + s) * A + a] = qv;
                if (qv > best) {
                    best = qv;
                    best_action = a;
                }
            }
            v[s] = best;
            plan.policy.at(h, s) = best_action;
        }
        v_next = v;
    }
    return plan;
}

std::pair<ValueTable, NonstationaryPolicy> estimate_greedy_policy(const EmpiricalCounts& counts,
                                                                  const RewardTable& reward,
                                                                  int horizon) {
    if (horizon < 1) throw std::invalid_argument("estimate_greedy_policy: horizon >= 1");
    const int S = counts.num_states;
    const int A = counts.num_actions;
    ValueTable values(horizon, S);
    NonstationaryPolicy policy(horizon, S);
    for (int h = horizon - 1; h >= 0; --h) {
        for (int s = 0; s < S; ++s) {
            double best = -1.0;
            int best_action = 0;
            for (int a = 0; a < A; ++a) {
                double q = reward.at(s, a);
                const std::int64_t n = counts.pair_count(s, a);
                if (n > 0) {
                    const double inv = 1.0 / static_cast<double>(n);
                    for (int s2 = 0; s2 < S; ++s2) {
                        const std::int64_t c = counts.triple_count(s, a, s2);
                        if (c > 0) q += static_cast<double>(c) * inv * values.at(h + 1, s2);
                    }
                }
                if (q > best) {
                    best = q;
                    best_action = a;
                }
            }
            values.at(h, s) = best;
            policy.at(h, s) = best_action;
        }
    }
    return {std::move(values), std::move(policy)};
}

UcbviAgent::UcbviAgent(int num_states, int num_actions, std::int64_t episodes,
                       std::int64_t horizon, double failure_prob, double bonus_scale,
                       bool tight_value_cap)
    : counts_(num_states, num_actions), horizon_(horizon),
      log_constant_(ucbvi_log_constant(LogConstantVariant::single_task, num_states, num_actions,
                                       episodes, horizon, 1, failure_prob)),
      bonus_scale_(bonus_scale), tight_value_cap_(tight_value_cap) {}

UcbviEpisodeResult UcbviAgent::run_episode(const MdpModel& env, int start, Rng& rng,
                                           std::int64_t steps) {
    if (steps < 0 || steps > horizon_) steps = horizon_;
    const UcbviPlan plan = ucbvi_plan(counts_, static_cast<int>(horizon_), env.reward,
                                      log_constant_, bonus_scale_, tight_value_cap_);
    UcbviEpisodeResult result;
    result.optimistic_value = plan.value_at(0, start);
    result.trace.reserve(steps);
    int s = start;
    for (std::int64_t h = 0; h < steps; ++h) {
        const int a = plan.policy.at(static_cast<int>(h), s);
        const double r = env.reward.at(s, a);
        const int s2 = sample_transition(env, s, a, rng);
        counts_.record(s, a, s2);
        result.trace.push_back({s, a, r, s2});
        result.realized_return += r;
        s = s2;
    }
    return result;
}

ExternalSamplesUcbviAgent::ExternalSamplesUcbviAgent(int num_states, int num_actions,
                                                     std::int64_t episodes, std::int64_t horizon,
                                                     double failure_prob,
                                                     std::int64_t samples_per_pair,
                                                     double bonus_scale, bool tight_value_cap)
    : interaction_counts_(num_states, num_actions), external_counts_(num_states, num_actions),
      horizon_(horizon), samples_per_pair_(samples_per_pair),
      log_constant_(ucbvi_log_constant(LogConstantVariant::external_samples, num_states,
                                       num_actions, episodes, horizon, 1, failure_prob,
                                       samples_per_pair)),
      bonus_scale_(bonus_scale), tight_value_cap_(tight_value_cap) {}

UcbviEpisodeResult ExternalSamplesUcbviAgent::run_episode(const MdpModel& env, int start,
                                                          Rng& rng, Rng& oracle_rng) {
    const int S = interaction_counts_.num_states;
    const int A = interaction_counts_.num_actions;
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a)
            for (std::int64_t i = 0; i < samples_per_pair_; ++i)
                external_counts_.record(s, a, sample_transition(env, s, a, oracle_rng));

    EmpiricalCounts pooled = interaction_counts_;
    pooled.merge(external_counts_);
    last_plan_ = ucbvi_plan(pooled, static_cast<int>(horizon_), env.reward, log_constant_,
                            bonus_scale_, tight_value_cap_);

    UcbviEpisodeResult result;
    result.optimistic_value = last_plan_.value_at(0, start);
    result.trace.reserve(horizon_);
    int s = start;
    for (std::int64_t h = 0; h < horizon_; ++h) {
        const int a = last_plan_.policy.at(static_cast<int>(h), s);
        const double r = env.reward.at(s, a);
        const int s2 = sample_transition(env, s, a, rng);
        interaction_counts_.record(s, a, s2);
        result.trace.push_back({s, a, r, s2});
        result.realized_return += r;
        s = s2;
    }
    return result;
}

}  // namespace mtrl
