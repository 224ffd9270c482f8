#pragma once

#include <cstdint>
#include <vector>

#include "mtrl/separability.hpp"

namespace mtrl {

// 4x4 gridworld family: one easy-to-reach rewarding corner per model.
// States are numbered row-major, state = 4*row + col, rows top to bottom.
// Actions: 0 = left, 1 = right, 2 = up, 3 = down (frozen ordering; the
// published distinguishing sets validate under it).
struct GridworldSpec {
    int rows = 4;
    int cols = 4;
    double success_prob = 0.85;
    double reduced_success = 0.2;       // actions into a hard-to-reach corner
    double reduced_success_corner33 = 0.3;  // except when that corner is (3,3)
    double corner_stay = 0.7;           // border-facing action at a corner
    double corner_opposite = 0.3;
};

inline constexpr int kGridActionLeft = 0;
inline constexpr int kGridActionRight = 1;
inline constexpr int kGridActionUp = 2;
inline constexpr int kGridActionDown = 3;

// Four 16-state 4-action models with easy corners (0,0), (0,3), (3,0), (3,3);
// reward 1 at the four corner states, 0 elsewhere.
ModelSet make_gridworld_set(const GridworldSpec& spec = {});

// Two-state chain: from 0 every action reaches 1 w.p. delta except the best
// action at delta + lam/2; from 1 every action returns w.p. delta. Reward 1
// at state 1.
struct JaoSpec {
    int num_actions = 2;
    double delta = 0.25;
    double lam = 0.0;
    int best_action = 0;
};

MdpModel make_jao(const JaoSpec& spec);

// Set of JAO models sharing delta/lam, model i having best action i.
ModelSet make_jao_set(int num_models, int num_actions, double delta, double lam);

// optimal infinite-horizon average reward of a JAO chain
double jao_optimal_average_reward(double delta, double lam);

// closed-form optimal H-step value from state 0 of a JAO chain
double jao_optimal_value(double delta, double lam, int horizon);

// Three-state instance: hub 0, rewarding state 1, reward-free state 2.
// Actions 0..Q-1 point right (0 -> 1 at delta, best row at delta + capital_delta),
// actions Q..2Q-1 point left (0 -> 2 at 1/2, best row at 1/2 + lam/2).
// From states 1 and 2 every action returns to 0 w.p. delta.
struct TwoJaoSpec {
    int actions_per_side = 12;  // Q
    double delta = 0.25;
    double lam = 0.5;
    double capital_delta = 0.0;
    int best_row = 0;
};

MdpModel make_two_jao(const TwoJaoSpec& spec);

// Q models with best_row = i; delta = 4/D, capital_delta = (1/20)*sqrt(SA/(3HD))
// with SA = 12Q.
ModelSet make_two_jao_set(int q, double d, std::int64_t h, double lam);

// Variant with the 0 <-> 2 transitions reversed: the left-side rows act from
// state 2 and nothing leaves state 0 toward 2, so 2 is unreachable from 0.
MdpModel make_noncommunicating_two_jao(const TwoJaoSpec& spec);

ModelSet make_noncommunicating_two_jao_set(int q, double d, std::int64_t h, double lam);

// Two 3-state 2-action models identical everywhere except (s0, a0), where the
// successor split over (s1, s2) is (lam, 1-lam) vs (lam/2, 1-lam/2). The pair
// is lam-separable yet induces identical Markov chains under any policy that
// avoids (s0, a0).
ModelSet make_counterexample_pair(double lam);

// Q x 2 table of coins: column 0 all 1/2 except row theta at 1/2 + lam;
// column 1 all delta except row theta at delta + epsilon, with epsilon tied
// to the flip budget as (1/20)*sqrt(q*delta/h).
struct CoinInstance {
    int q = 1;
    int theta = 0;
    double lam = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;
    std::vector<double> means;  // row-major [row][column], q x 2

    double mean(int row, int col) const { return means[static_cast<std::size_t>(row) * 2 + col]; }
};

CoinInstance make_coin_instance(int q, double lam, double delta, std::int64_t h_budget, int theta);

}  // namespace mtrl
