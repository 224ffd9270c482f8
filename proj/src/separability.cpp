#include "mtrl/separability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mtrl {

StateActionSet StateActionSet::from_pairs(std::vector<std::pair<int, int>> raw, int num_states,
                                          int num_actions) {
    for (const auto& [s, a] : raw)
        if (s < 0 || s >= num_states || a < 0 || a >= num_actions)
            throw std::out_of_range("StateActionSet: pair (" + std::to_string(s) + "," +
                                    std::to_string(a) + ") out of range");
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    StateActionSet set;
    set.pairs = std::move(raw);
    return set;
}

StateActionSet StateActionSet::full(int num_states, int num_actions) {
    StateActionSet set;
    set.pairs.reserve(static_cast<std::size_t>(num_states) * num_actions);
    for (int s = 0; s < num_states; ++s)
        for (int a = 0; a < num_actions; ++a) set.pairs.emplace_back(s, a);
    return set;
}

bool StateActionSet::contains(int s, int a) const {
    return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(s, a));
}

void StateActionSet::insert(int s, int a) {
    const auto p = std::make_pair(s, a);
    const auto it = std::lower_bound(pairs.begin(), pairs.end(), p);
    if (it == pairs.end() || *it != p) pairs.insert(it, p);
}

void ModelSet::validate() const {
    if (models.empty()) throw std::invalid_argument("ModelSet: at least one model required");
    const int S = models[0].num_states();
    const int A = models[0].num_actions();
    for (const auto& m : models) {
        m.validate();
        if (m.num_states() != S || m.num_actions() != A)
            throw std::invalid_argument("ModelSet: models are not dimensionally identical");
        if (m.reward.values != models[0].reward.values)
            throw std::invalid_argument("ModelSet: reward tables are not shared");
    }
}

double l1_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("l1_distance: length mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
    return d;
}

StateActionSet pairwise_distinguishing_pairs(const MdpModel& mi, const MdpModel& mj, double lam) {
    if (lam <= 0.0 || lam > 2.0)
        throw std::invalid_argument("pairwise_distinguishing_pairs: lam must be in (0, 2]");
    if (mi.num_states() != mj.num_states() || mi.num_actions() != mj.num_actions())
        throw std::invalid_argument("pairwise_distinguishing_pairs: dimension mismatch");
    StateActionSet set;
    for (int s = 0; s < mi.num_states(); ++s)
        for (int a = 0; a < mi.num_actions(); ++a)
            if (l1_distance(mi.kernel.row(s, a), mj.kernel.row(s, a)) >= lam)
                set.pairs.emplace_back(s, a);
    return set;
}

double separation_level(const ModelSet& set) {
    if (set.size() < 2) throw std::invalid_argument("separation_level: need at least two models");
    double level = std::numeric_limits<double>::infinity();
    for (int i = 0; i < set.size(); ++i) {
        for (int j = i + 1; j < set.size(); ++j) {
            double best = 0.0;
            for (int s = 0; s < set.num_states(); ++s)
                for (int a = 0; a < set.num_actions(); ++a)
                    best = std::max(best, l1_distance(set.models[i].kernel.row(s, a),
                                                      set.models[j].kernel.row(s, a)));
            level = std::min(level, best);
        }
    }
    return level;
}

StateActionSet greedy_distinguishing_set(const ModelSet& set, double lam) {
    if (lam <= 0.0 || lam > 2.0)
        throw std::invalid_argument("greedy_distinguishing_set: lam must be in (0, 2]");
    const int m = set.size();
    const int S = set.num_states();
    const int A = set.num_actions();

    // covers[s][a] lists the model pairs separated at level lam by (s,a)
    std::vector<std::vector<int>> covers(static_cast<std::size_t>(S) * A);
    std::vector<char> covered;
    int num_pairs = 0;
    std::vector<std::pair<int, int>> pair_of_index;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) pair_of_index.emplace_back(i, j), ++num_pairs;

    for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
            auto& list = covers[static_cast<std::size_t>(s) * A + a];
            for (int p = 0; p < num_pairs; ++p) {
                const auto [i, j] = pair_of_index[p];
                if (l1_distance(set.models[i].kernel.row(s, a),
                                set.models[j].kernel.row(s, a)) >= lam)
                    list.push_back(p);
            }
        }
    }

    covered.assign(num_pairs, 0);
    int remaining = num_pairs;
    StateActionSet result;
    while (remaining > 0) {
        int best_gain = 0, best_s = -1, best_a = -1;
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                int gain = 0;
                for (int p : covers[static_cast<std::size_t>(s) * A + a])
                    if (!covered[p]) ++gain;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_s = s;
                    best_a = a;
                }
            }
        }
        if (best_gain == 0)
            throw NotSeparableError("greedy_distinguishing_set: model set is not separable at "
                                    "level " + std::to_string(lam));
        result.insert(best_s, best_a);
        for (int p : covers[static_cast<std::size_t>(best_s) * A + best_a]) {
            if (!covered[p]) {
                covered[p] = 1;
                --remaining;
            }
        }
    }
    return result;
}

std::int64_t required_visits(double lam, int num_states, double failure_prob,
                             std::int64_t episodes, std::int64_t gamma_size) {
    if (lam <= 0.0 || lam > 2.0) throw std::invalid_argument("required_visits: lam in (0, 2]");
    if (failure_prob <= 0.0 || failure_prob >= 1.0)
        throw std::invalid_argument("required_visits: failure probability in (0, 1)");
    if (episodes < 1 || gamma_size < 1 || num_states < 1)
        throw std::invalid_argument("required_visits: positive counts required");
    const double log_term =
        std::log(static_cast<double>(episodes) * static_cast<double>(gamma_size) / failure_prob);
    const double n = 256.0 / (lam * lam) * std::max(static_cast<double>(num_states), log_term);
    return static_cast<std::int64_t>(std::ceil(n));
}

std::int64_t clustering_horizon(double dtilde, std::int64_t gamma_size, std::int64_t n) {
    if (dtilde <= 0.0 || gamma_size < 1 || n < 1)
        throw std::invalid_argument("clustering_horizon: positive arguments required");
    const double h0 = 12.0 * dtilde * static_cast<double>(gamma_size) * static_cast<double>(n);
    return static_cast<std::int64_t>(std::ceil(h0));
}

}  // namespace mtrl
