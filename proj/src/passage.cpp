#include "mtrl/passage.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace mtrl {

namespace {

// Minimal expected first-passage times into `target` from every other state,
// T(s) = min_a [1 + sum_{x != target} P(x|s,a) T(x)], iterated to fixed point.
std::vector<double> min_passage_into(const MdpModel& model, int target,
                                     const PassageOptions& opts) {
    const int S = model.num_states();
    const int A = model.num_actions();
    std::vector<double> t(S, 0.0), next(S, 0.0);
    for (std::int64_t it = 0; it < opts.max_iterations; ++it) {
        double change = 0.0;
        double largest = 0.0;
        for (int s = 0; s < S; ++s) {
            if (s == target) continue;
            double best = std::numeric_limits<double>::infinity();
            for (int a = 0; a < A; ++a) {
                double v = 1.0;
                const auto row = model.kernel.row(s, a);
                for (int x = 0; x < S; ++x)
                    if (x != target) v += row[x] * t[x];
                best = std::min(best, v);
            }
            next[s] = best;
            change = std::max(change, std::abs(best - t[s]));
            largest = std::max(largest, best);
        }
        t.swap(next);
        if (largest > opts.ceiling)
            throw InfiniteDiameterError("infinite diameter: state " + std::to_string(target) +
                                        " unreachable from some state");
        if (change < opts.tolerance) return t;
    }
    throw InfiniteDiameterError("first-passage value iteration failed to converge");
}

// states from which `target` is reachable along the support of the policy chain
std::vector<char> reaches_target(const TransitionKernel& kernel, const std::vector<int>& policy,
                                 int target) {
    const int S = kernel.num_states;
    std::vector<char> reach(S, 0);
    reach[target] = 1;
    bool grew = true;
    while (grew) {
        grew = false;
        for (int s = 0; s < S; ++s) {
            if (reach[s]) continue;
            const auto row = kernel.row(s, policy[s]);
            for (int x = 0; x < S; ++x) {
                if (row[x] > 0.0 && reach[x]) {
                    reach[s] = 1;
                    grew = true;
                    break;
                }
            }
        }
    }
    return reach;
}

// Expected first-passage times into `target` under a fixed policy, solving
// (I - P_restricted) T = 1 over the non-target states. The expectation is
// infinite for any state with positive probability of never reaching the
// target, i.e. any state that can reach the non-returning component.
std::vector<double> policy_passage_into(const MdpModel& model, const std::vector<int>& policy,
                                        int target) {
    const int S = model.num_states();
    const auto reach = reaches_target(model.kernel, policy, target);

    // bad[s]: s can reach a non-returning state without passing through target
    std::vector<char> bad(S, 0);
    for (int s = 0; s < S; ++s) bad[s] = !reach[s];
    bool grew = true;
    while (grew) {
        grew = false;
        for (int s = 0; s < S; ++s) {
            if (bad[s] || s == target) continue;
            const auto row = model.kernel.row(s, policy[s]);
            for (int x = 0; x < S; ++x) {
                if (row[x] > 0.0 && bad[x]) {
                    bad[s] = 1;
                    grew = true;
                    break;
                }
            }
        }
    }

    std::vector<int> idx(S, -1);
    int n = 0;
    for (int s = 0; s < S; ++s)
        if (s != target && !bad[s]) idx[s] = n++;

    std::vector<double> t(S, std::numeric_limits<double>::infinity());
    t[target] = 0.0;
    if (n > 0) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
        Eigen::VectorXd rhs = Eigen::VectorXd::Ones(n);
        for (int s = 0; s < S; ++s) {
            if (idx[s] < 0) continue;
            const auto row = model.kernel.row(s, policy[s]);
            for (int x = 0; x < S; ++x)
                if (x != target && idx[x] >= 0) m(idx[s], idx[x]) -= row[x];
        }
        const Eigen::VectorXd sol = m.partialPivLu().solve(rhs);
        for (int s = 0; s < S; ++s)
            if (idx[s] >= 0) t[s] = sol(idx[s]);
    }
    return t;
}

}  // namespace

double diameter(const MdpModel& model, const PassageOptions& opts) {
    const int S = model.num_states();
    double worst = 0.0;
    for (int target = 0; target < S; ++target) {
        const auto t = min_passage_into(model, target, opts);
        for (int s = 0; s < S; ++s)
            if (s != target) worst = std::max(worst, t[s]);
    }
    return worst;
}

double hitting_time_upper_bound(const MdpModel& model, std::int64_t guard) {
    const int S = model.num_states();
    const int A = model.num_actions();
    double count = 1.0;
    for (int s = 0; s < S; ++s) {
        count *= A;
        if (count > static_cast<double>(guard))
            throw EnumerationGuardError(
                "hitting_time_upper_bound: A^S exceeds the enumeration guard; supply the "
                "hitting-time bound explicitly");
    }

    double worst = 0.0;
    std::vector<int> policy(S, 0);
    for (;;) {
        for (int target = 0; target < S; ++target) {
            const auto t = policy_passage_into(model, policy, target);
            for (int s = 0; s < S; ++s) {
                if (s == target) continue;
                if (std::isinf(t[s])) return std::numeric_limits<double>::infinity();
                worst = std::max(worst, t[s]);
            }
        }
        // next policy in lexicographic order
        int pos = 0;
        while (pos < S && ++policy[pos] == A) policy[pos++] = 0;
        if (pos == S) break;
    }
    return worst;
}

}  // namespace mtrl
