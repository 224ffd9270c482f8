#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mtrl/rng.hpp"

namespace mtrl {

inline constexpr double kRowSumTolerance = 1e-9;

// S x A x S table of transition probabilities, P(s' | s, a).
struct TransitionKernel {
    int num_states = 0;
    int num_actions = 0;
    std::vector<double> probs;  // row-major [s][a][s']

    TransitionKernel() = default;
    TransitionKernel(int s, int a)
        : num_states(s), num_actions(a),
          probs(static_cast<std::size_t>(s) * a * s, 0.0) {}

    double& at(int s, int a, int s2) {
        return probs[(static_cast<std::size_t>(s) * num_actions + a) * num_states + s2];
    }
    double at(int s, int a, int s2) const {
        return probs[(static_cast<std::size_t>(s) * num_actions + a) * num_states + s2];
    }
    std::span<const double> row(int s, int a) const {
        return {probs.data() + (static_cast<std::size_t>(s) * num_actions + a) * num_states,
                static_cast<std::size_t>(num_states)};
    }
    std::span<double> row(int s, int a) {
        return {probs.data() + (static_cast<std::size_t>(s) * num_actions + a) * num_states,
                static_cast<std::size_t>(num_states)};
    }

    // throws std::invalid_argument if a row fails to normalize within
    // kRowSumTolerance or contains a negative entry
    void validate() const;
};

// S x A table of deterministic rewards in [0, 1].
struct RewardTable {
    int num_states = 0;
    int num_actions = 0;
    std::vector<double> values;  // row-major [s][a]

    RewardTable() = default;
    RewardTable(int s, int a)
        : num_states(s), num_actions(a), values(static_cast<std::size_t>(s) * a, 0.0) {}

    double& at(int s, int a) { return values[static_cast<std::size_t>(s) * num_actions + a]; }
    double at(int s, int a) const {
        return values[static_cast<std::size_t>(s) * num_actions + a];
    }

    void validate() const;
};

struct MdpModel {
    TransitionKernel kernel;
    RewardTable reward;
    std::string label;

    int num_states() const { return kernel.num_states; }
    int num_actions() const { return kernel.num_actions; }

    // checks kernel/reward invariants and dimension agreement
    void validate() const;
};

// One action per (step, state); horizon H rows.
struct NonstationaryPolicy {
    int horizon = 0;
    int num_states = 0;
    std::vector<int> actions;  // row-major [h][s]

    NonstationaryPolicy() = default;
    NonstationaryPolicy(int h, int s)
        : horizon(h), num_states(s), actions(static_cast<std::size_t>(h) * s, 0) {}

    int& at(int h, int s) { return actions[static_cast<std::size_t>(h) * num_states + s]; }
    int at(int h, int s) const { return actions[static_cast<std::size_t>(h) * num_states + s]; }
};

// (H+1) x S value table; values[H][s] = 0 is the terminal boundary.
struct ValueTable {
    int horizon = 0;
    int num_states = 0;
    std::vector<double> values;  // row-major [h][s], h in [0, H]

    ValueTable() = default;
    ValueTable(int h, int s)
        : horizon(h), num_states(s), values(static_cast<std::size_t>(h + 1) * s, 0.0) {}

    double& at(int h, int s) { return values[static_cast<std::size_t>(h) * num_states + s]; }
    double at(int h, int s) const {
        return values[static_cast<std::size_t>(h) * num_states + s];
    }
};

// max - min of the row values[h][.]
double value_span(const ValueTable& table, int h);

// draws s' ~ P(. | s, a); deterministic given the rng state
int sample_transition(const MdpModel& model, int s, int a, Rng& rng);

}  // namespace mtrl
