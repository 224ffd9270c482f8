#include "mtrl/environments.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mtrl {

namespace {

// displacement per action: left, right, up, down
constexpr std::array<int, 4> kDr = {0, 0, -1, 1};
constexpr std::array<int, 4> kDc = {-1, 1, 0, 0};

bool is_corner(const GridworldSpec& g, int r, int c) {
    return (r == 0 || r == g.rows - 1) && (c == 0 || c == g.cols - 1);
}

}  // namespace

ModelSet make_gridworld_set(const GridworldSpec& g) {
    const int S = g.rows * g.cols;
    const int A = 4;
    const auto state_of = [&](int r, int c) { return r * g.cols + c; };

    RewardTable reward(S, A);
    const std::array<std::pair<int, int>, 4> corners = {
        std::make_pair(0, 0), {0, g.cols - 1}, {g.rows - 1, 0}, {g.rows - 1, g.cols - 1}};
    for (const auto& [cr, cc] : corners)
        for (int a = 0; a < A; ++a) reward.at(state_of(cr, cc), a) = 1.0;

    ModelSet set;
    for (int m = 0; m < 4; ++m) {
        const auto easy = corners[m];
        TransitionKernel kernel(S, A);
        for (int r = 0; r < g.rows; ++r) {
            for (int c = 0; c < g.cols; ++c) {
                const int s = state_of(r, c);
                // in-grid 4-neighborhood
                std::vector<int> neighbors;
                for (int a = 0; a < A; ++a) {
                    const int nr = r + kDr[a], nc = c + kDc[a];
                    if (nr >= 0 && nr < g.rows && nc >= 0 && nc < g.cols)
                        neighbors.push_back(state_of(nr, nc));
                }
                for (int a = 0; a < A; ++a) {
                    const int tr = r + kDr[a], tc = c + kDc[a];
                    const bool off_grid = tr < 0 || tr >= g.rows || tc < 0 || tc >= g.cols;
                    auto row = kernel.row(s, a);
                    if (off_grid) {
                        if (is_corner(g, r, c)) {
                            // stay, or slide to the cell opposite the intended direction
                            row[s] += g.corner_stay;
                            row[state_of(r - kDr[a], c - kDc[a])] += g.corner_opposite;
                        } else {
                            for (int n : neighbors) row[n] += 1.0 / neighbors.size();
                        }
                        continue;
                    }
                    const int target = state_of(tr, tc);
                    double success = g.success_prob;
                    if (is_corner(g, tr, tc) && std::make_pair(tr, tc) != easy)
                        success = (tr == g.rows - 1 && tc == g.cols - 1)
                                      ? g.reduced_success_corner33
                                      : g.reduced_success;
                    row[target] += success;
                    const double rest = (1.0 - success) / (neighbors.size() - 1);
                    for (int n : neighbors)
                        if (n != target) row[n] += rest;
                }
            }
        }
        MdpModel model{std::move(kernel), reward, "m" + std::to_string(m + 1)};
        set.models.push_back(std::move(model));
    }
    set.validate();
    set.lam = separation_level(set);
    set.dtilde = 7.0;  // hitting-time bound used by the episode loop
    return set;
}

MdpModel make_jao(const JaoSpec& spec) {
    if (spec.num_actions < 1) throw std::invalid_argument("make_jao: need at least one action");
    if (spec.best_action < 0 || spec.best_action >= spec.num_actions)
        throw std::invalid_argument("make_jao: best_action out of range");
    if (spec.delta <= 0.0 || spec.delta >= 1.0)
        throw std::invalid_argument("make_jao: delta must lie in (0, 1)");
    if (spec.lam < 0.0 || spec.delta + spec.lam / 2.0 > 1.0)
        throw std::invalid_argument("make_jao: delta + lam/2 exceeds 1");

    TransitionKernel kernel(2, spec.num_actions);
    for (int a = 0; a < spec.num_actions; ++a) {
        const double up = spec.delta + (a == spec.best_action ? spec.lam / 2.0 : 0.0);
        kernel.at(0, a, 1) = up;
        kernel.at(0, a, 0) = 1.0 - up;
        kernel.at(1, a, 0) = spec.delta;
        kernel.at(1, a, 1) = 1.0 - spec.delta;
    }
    RewardTable reward(2, spec.num_actions);
    for (int a = 0; a < spec.num_actions; ++a) reward.at(1, a) = 1.0;
    return MdpModel{std::move(kernel), std::move(reward),
                    "jao_best" + std::to_string(spec.best_action)};
}

ModelSet make_jao_set(int num_models, int num_actions, double delta, double lam) {
    if (num_models < 1 || num_models > num_actions)
        throw std::invalid_argument("make_jao_set: need 1 <= M <= A");
    ModelSet set;
    for (int i = 0; i < num_models; ++i)
        set.models.push_back(make_jao({num_actions, delta, lam, i}));
    set.validate();
    set.lam = lam;
    set.d = 1.0 / delta;
    set.dtilde = 1.0 / delta;
    return set;
}

double jao_optimal_average_reward(double delta, double lam) {
    return (delta + lam / 2.0) / (2.0 * delta + lam / 2.0);
}

double jao_optimal_value(double delta, double lam, int horizon) {
    const double mix = 2.0 * delta + lam / 2.0;
    const double rho = jao_optimal_average_reward(delta, lam);
    const double delta1 = -rho;  // occupancy gap at step 1 when starting in state 0
    return rho * horizon + delta1 * (1.0 - std::pow(1.0 - mix, horizon)) / mix;
}

MdpModel make_two_jao(const TwoJaoSpec& spec) {
    const int q = spec.actions_per_side;
    if (q < 1) throw std::invalid_argument("make_two_jao: need at least one action per side");
    if (spec.best_row < 0 || spec.best_row >= q)
        throw std::invalid_argument("make_two_jao: best_row out of range");
    if (spec.delta <= 0.0 || spec.delta + spec.capital_delta > 1.0)
        throw std::invalid_argument("make_two_jao: delta + capital_delta exceeds 1");
    if (spec.lam < 0.0 || 0.5 + spec.lam / 2.0 > 1.0)
        throw std::invalid_argument("make_two_jao: 1/2 + lam/2 exceeds 1");

    const int A = 2 * q;
    TransitionKernel kernel(3, A);
    for (int a = 0; a < A; ++a) {
        if (a < q) {  // right side: hub -> reward state
            const double up = spec.delta + (a == spec.best_row ? spec.capital_delta : 0.0);
            kernel.at(0, a, 1) = up;
            kernel.at(0, a, 0) = 1.0 - up;
        } else {  // left side: hub -> reward-free state
            const double out = 0.5 + (a - q == spec.best_row ? spec.lam / 2.0 : 0.0);
            kernel.at(0, a, 2) = out;
            kernel.at(0, a, 0) = 1.0 - out;
        }
        kernel.at(1, a, 0) = spec.delta;
        kernel.at(1, a, 1) = 1.0 - spec.delta;
        kernel.at(2, a, 0) = spec.delta;
        kernel.at(2, a, 2) = 1.0 - spec.delta;
    }
    RewardTable reward(3, A);
    for (int a = 0; a < A; ++a) reward.at(1, a) = 1.0;
    return MdpModel{std::move(kernel), std::move(reward),
                    "two_jao_best" + std::to_string(spec.best_row)};
}

namespace {

double two_jao_capital_delta(int q, double d, std::int64_t h) {
    const double sa = 12.0 * q;
    return 0.05 * std::sqrt(sa / (3.0 * static_cast<double>(h) * d));
}

}  // namespace

ModelSet make_two_jao_set(int q, double d, std::int64_t h, double lam) {
    if (d <= 4.0) throw std::invalid_argument("make_two_jao_set: need d > 4");
    const double delta = 4.0 / d;
    const double cap = two_jao_capital_delta(q, d, h);
    ModelSet set;
    for (int i = 0; i < q; ++i) set.models.push_back(make_two_jao({q, delta, lam, cap, i}));
    set.validate();
    set.lam = lam;
    set.d = 1.0 / delta;
    return set;
}

MdpModel make_noncommunicating_two_jao(const TwoJaoSpec& spec) {
    const int q = spec.actions_per_side;
    if (q < 1) throw std::invalid_argument("make_noncommunicating_two_jao: need actions");
    if (spec.best_row < 0 || spec.best_row >= q)
        throw std::invalid_argument("make_noncommunicating_two_jao: best_row out of range");
    if (spec.delta <= 0.0 || spec.delta + spec.capital_delta > 1.0)
        throw std::invalid_argument("make_noncommunicating_two_jao: delta + capital_delta > 1");
    if (spec.lam < 0.0 || 0.5 + spec.lam / 2.0 > 1.0)
        throw std::invalid_argument("make_noncommunicating_two_jao: 1/2 + lam/2 exceeds 1");

    const int A = 2 * q;
    TransitionKernel kernel(3, A);
    for (int a = 0; a < A; ++a) {
        if (a < q) {  // right side unchanged
            const double up = spec.delta + (a == spec.best_row ? spec.capital_delta : 0.0);
            kernel.at(0, a, 1) = up;
            kernel.at(0, a, 0) = 1.0 - up;
        } else {  // left-side actions do nothing from the hub
            kernel.at(0, a, 0) = 1.0;
        }
        kernel.at(1, a, 0) = spec.delta;
        kernel.at(1, a, 1) = 1.0 - spec.delta;
        // the left-side rows act from state 2 instead
        const double out = 0.5 + (a >= q && a - q == spec.best_row ? spec.lam / 2.0 : 0.0);
        kernel.at(2, a, 0) = out;
        kernel.at(2, a, 2) = 1.0 - out;
    }
    RewardTable reward(3, A);
    for (int a = 0; a < A; ++a) reward.at(1, a) = 1.0;
    return MdpModel{std::move(kernel), std::move(reward),
                    "noncomm_two_jao_best" + std::to_string(spec.best_row)};
}

ModelSet make_noncommunicating_two_jao_set(int q, double d, std::int64_t h, double lam) {
    if (d <= 4.0) throw std::invalid_argument("make_noncommunicating_two_jao_set: need d > 4");
    const double delta = 4.0 / d;
    const double cap = two_jao_capital_delta(q, d, h);
    ModelSet set;
    for (int i = 0; i < q; ++i)
        set.models.push_back(make_noncommunicating_two_jao({q, delta, lam, cap, i}));
    set.validate();
    set.lam = lam;
    return set;
}

ModelSet make_counterexample_pair(double lam) {
    if (lam <= 0.0 || lam >= 1.0)
        throw std::invalid_argument("make_counterexample_pair: lam must lie in (0, 1)");
    const int S = 3, A = 2;
    RewardTable reward(S, A);

    const auto base = [&](double split) {
        TransitionKernel kernel(S, A);
        kernel.at(0, 0, 1) = split;        // (s0, a0): the only differing row
        kernel.at(0, 0, 2) = 1.0 - split;
        kernel.at(0, 1, 1) = 0.5;          // shared rows below
        kernel.at(0, 1, 2) = 0.5;
        kernel.at(1, 0, 2) = 1.0;
        kernel.at(1, 1, 0) = 1.0;
        kernel.at(2, 0, 1) = 1.0;
        kernel.at(2, 1, 0) = 1.0;
        return kernel;
    };

    ModelSet set;
    set.models.push_back(MdpModel{base(lam), reward, "counterexample_full"});
    set.models.push_back(MdpModel{base(lam / 2.0), reward, "counterexample_half"});
    set.validate();
    set.lam = lam;
    return set;
}

CoinInstance make_coin_instance(int q, double lam, double delta, std::int64_t h_budget,
                                int theta) {
    if (q < 1) throw std::invalid_argument("make_coin_instance: q must be positive");
    // the hard-instance analysis assumes lam <= 1/4; the lab sweeps up to 1/2,
    // where the head probability 1/2 + lam still fits
    if (lam <= 0.0 || lam > 0.5)
        throw std::invalid_argument("make_coin_instance: lam must lie in (0, 1/2]");
    if (delta <= 0.0 || delta > 0.25)
        throw std::invalid_argument("make_coin_instance: delta must lie in (0, 1/4]");
    if (h_budget < 1) throw std::invalid_argument("make_coin_instance: budget must be positive");
    if (theta < 0 || theta >= q) throw std::invalid_argument("make_coin_instance: theta range");

    const double eps = 0.05 * std::sqrt(static_cast<double>(q) * delta /
                                        static_cast<double>(h_budget));
    if (delta + eps > 0.5)
        throw std::invalid_argument("make_coin_instance: delta + epsilon exceeds 1/2");

    CoinInstance inst;
    inst.q = q;
    inst.theta = theta;
    inst.lam = lam;
    inst.delta = delta;
    inst.epsilon = eps;
    inst.means.assign(static_cast<std::size_t>(q) * 2, 0.0);
    for (int r = 0; r < q; ++r) {
        inst.means[static_cast<std::size_t>(r) * 2 + 0] = (r == theta) ? 0.5 + lam : 0.5;
        inst.means[static_cast<std::size_t>(r) * 2 + 1] = (r == theta) ? delta + eps : delta;
    }
    return inst;
}

}  // namespace mtrl
