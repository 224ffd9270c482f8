#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mtrl/counts.hpp"
#include "mtrl/mdp.hpp"

namespace mtrl {

struct NotSeparableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An ordered, duplicate-free set of (state, action) pairs.
struct StateActionSet {
    std::vector<std::pair<int, int>> pairs;  // kept sorted lexicographically

    static StateActionSet from_pairs(std::vector<std::pair<int, int>> raw, int num_states,
                                     int num_actions);
    static StateActionSet full(int num_states, int num_actions);

    bool contains(int s, int a) const;
    void insert(int s, int a);
    std::size_t size() const { return pairs.size(); }
    bool empty() const { return pairs.empty(); }
};

// An ordered collection of MDP models over shared state/action spaces with a
// bit-identical shared reward table.
struct ModelSet {
    std::vector<MdpModel> models;
    std::optional<double> lam;     // separation level, when known
    std::optional<double> d;       // diameter bound, when known
    std::optional<double> dtilde;  // hitting-time bound, when known

    int size() const { return static_cast<int>(models.size()); }
    int num_states() const { return models.at(0).num_states(); }
    int num_actions() const { return models.at(0).num_actions(); }
    const RewardTable& shared_reward() const { return models.at(0).reward; }

    // M >= 1, dimensions identical, reward tables bit-equal, kernels valid
    void validate() const;
};

// sum_i |p[i] - q[i]|; throws on length mismatch; lies in [0, 2] for
// probability rows
double l1_distance(std::span<const double> p, std::span<const double> q);

// All (s,a) with ||P_i(s,a) - P_j(s,a)||_1 >= lam.
StateActionSet pairwise_distinguishing_pairs(const MdpModel& mi, const MdpModel& mj, double lam);

// min over unordered model pairs of the max over (s,a) of the l1 distance:
// the largest level at which the set is separable. Requires M >= 2.
double separation_level(const ModelSet& set);

// Greedy cover: repeatedly pick the (s,a) covering the most still-uncovered
// model pairs at level lam (ties lexicographic). Result size <= C(M,2).
// Throws NotSeparableError if some model pair has no qualifying (s,a).
StateActionSet greedy_distinguishing_set(const ModelSet& set, double lam);

// ceil( (256/lam^2) * max{S, ln(K*gamma_size/p1)} ): per-pair visits needed
// for the l1 estimates backing cluster identification.
std::int64_t required_visits(double lam, int num_states, double failure_prob,
                             std::int64_t episodes, std::int64_t gamma_size);

// ceil( 12 * dtilde * gamma_size * n ): clustering-phase step budget that
// collects n visits per distinguishing pair with high probability.
std::int64_t clustering_horizon(double dtilde, std::int64_t gamma_size, std::int64_t n);

}  // namespace mtrl
