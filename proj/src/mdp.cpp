#include "mtrl/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mtrl {

void TransitionKernel::validate() const {
    if (num_states <= 0 || num_actions <= 0)
        throw std::invalid_argument("TransitionKernel: dimensions must be positive");
    if (probs.size() != static_cast<std::size_t>(num_states) * num_actions * num_states)
        throw std::invalid_argument("TransitionKernel: probs size mismatch");
    for (int s = 0; s < num_states; ++s) {
        for (int a = 0; a < num_actions; ++a) {
            double sum = 0.0;
            for (int s2 = 0; s2 < num_states; ++s2) {
                const double p = at(s, a, s2);
                if (p < 0.0)
                    throw std::invalid_argument("TransitionKernel: negative probability at (" +
                                                std::to_string(s) + "," + std::to_string(a) + ")");
                sum += p;
            }
            if (std::abs(sum - 1.0) > kRowSumTolerance)
                throw std::invalid_argument("TransitionKernel: row (" + std::to_string(s) + "," +
                                            std::to_string(a) + ") sums to " +
                                            std::to_string(sum));
        }
    }
}

void RewardTable::validate() const {
    if (num_states <= 0 || num_actions <= 0)
        throw std::invalid_argument("RewardTable: dimensions must be positive");
    if (values.size() != static_cast<std::size_t>(num_states) * num_actions)
        throw std::invalid_argument("RewardTable: values size mismatch");
    for (double v : values)
        if (v < 0.0 || v > 1.0)
            throw std::invalid_argument("RewardTable: reward outside [0,1]");
}

void MdpModel::validate() const {
    kernel.validate();
    reward.validate();
    if (kernel.num_states != reward.num_states || kernel.num_actions != reward.num_actions)
        throw std::invalid_argument("MdpModel: kernel and reward dimensions disagree");
}

double value_span(const ValueTable& table, int h) {
    if (h < 0 || h > table.horizon) throw std::out_of_range("value_span: bad step index");
    const auto first = table.values.begin() + static_cast<std::size_t>(h) * table.num_states;
    const auto [lo, hi] = std::minmax_element(first, first + table.num_states);
    return *hi - *lo;
}

int sample_transition(const MdpModel& model, int s, int a, Rng& rng) {
    if (s < 0 || s >= model.num_states()) throw std::out_of_range("sample_transition: state");
    if (a < 0 || a >= model.num_actions()) throw std::out_of_range("sample_transition: action");
    const auto row = model.kernel.row(s, a);
    const double u = rng.next_unit();
    double cum = 0.0;
    int last_positive = -1;
    for (int s2 = 0; s2 < model.num_states(); ++s2) {
        const double p = row[s2];
        if (p > 0.0) last_positive = s2;
        cum += p;
        if (u < cum) return s2;
    }
    // u landed in the rounding slack past the final cumulative sum
    return last_positive >= 0 ? last_positive : model.num_states() - 1;
}

}  // namespace mtrl
