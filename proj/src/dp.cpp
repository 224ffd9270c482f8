#include "mtrl/dp.hpp"

#include <stdexcept>
#include <vector>

namespace mtrl {

std::pair<ValueTable, NonstationaryPolicy> optimal_value_and_policy(const MdpModel& model,
                                                                    int horizon) {
    if (horizon < 1) throw std::invalid_argument("optimal_value_and_policy: horizon must be >= 1");
    const int S = model.num_states();
    const int A = model.num_actions();
    ValueTable values(horizon, S);
    NonstationaryPolicy policy(horizon, S);

    for (int h = horizon - 1; h >= 0; --h) {
        for (int s = 0; s < S; ++s) {
            double best = -1.0;
            int best_action = 0;
            for (int a = 0; a < A; ++a) {
                double q = model.reward.at(s, a);
                const auto row = model.kernel.row(s, a);
                for (int s2 = 0; s2 < S; ++s2) q += row[s2] * values.at(h + 1, s2);
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

std::vector<double> optimal_start_values(const MdpModel& model, std::int64_t horizon) {
    if (horizon < 1) throw std::invalid_argument("optimal_start_values: horizon must be >= 1");
    const int S = model.num_states();
    const int A = model.num_actions();
    std::vector<double> v(S, 0.0), next(S, 0.0);
    for (std::int64_t h = 0; h < horizon; ++h) {
        for (int s = 0; s < S; ++s) {
            double best = -1.0;
            for (int a = 0; a < A; ++a) {
                double q = model.reward.at(s, a);
                const auto row = model.kernel.row(s, a);
                for (int s2 = 0; s2 < S; ++s2) q += row[s2] * v[s2];
                if (q > best) best = q;
            }
            next[s] = best;
        }
        v.swap(next);
    }
    return v;
}

double evaluate_policy(const MdpModel& model, const NonstationaryPolicy& policy, int start) {
    const int S = model.num_states();
    if (policy.num_states != S)
        throw std::invalid_argument("evaluate_policy: policy state count mismatch");
    if (start < 0 || start >= S) throw std::out_of_range("evaluate_policy: start state");

    std::vector<double> dist(S, 0.0), next(S);
    dist[start] = 1.0;
    double total = 0.0;
    for (int h = 0; h < policy.horizon; ++h) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int s = 0; s < S; ++s) {
            const double w = dist[s];
            if (w == 0.0) continue;
            const int a = policy.at(h, s);
            total += w * model.reward.at(s, a);
            const auto row = model.kernel.row(s, a);
            for (int s2 = 0; s2 < S; ++s2) next[s2] += w * row[s2];
        }
        dist.swap(next);
    }
    return total;
}

double evaluate_uniform_random(const MdpModel& model, int horizon, int start) {
    const int S = model.num_states();
    const int A = model.num_actions();
    if (start < 0 || start >= S) throw std::out_of_range("evaluate_uniform_random: start state");

    const double w_a = 1.0 / A;
    std::vector<double> dist(S, 0.0), next(S);
    dist[start] = 1.0;
    double total = 0.0;
    for (int h = 0; h < horizon; ++h) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int s = 0; s < S; ++s) {
            const double w = dist[s];
            if (w == 0.0) continue;
            for (int a = 0; a < A; ++a) {
                total += w * w_a * model.reward.at(s, a);
                const auto row = model.kernel.row(s, a);
                for (int s2 = 0; s2 < S; ++s2) next[s2] += w * w_a * row[s2];
            }
        }
        dist.swap(next);
    }
    return total;
}

}  // namespace mtrl
