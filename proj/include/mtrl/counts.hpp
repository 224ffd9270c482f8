#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mtrl {

// Visit counts N(s,a,s') and N(s,a) from which empirical transition rows are
// derived. The pair count is always the sum of its triple counts.
struct EmpiricalCounts {
    int num_states = 0;
    int num_actions = 0;
    std::vector<std::int64_t> triples;  // row-major [s][a][s']
    std::vector<std::int64_t> pairs;    // row-major [s][a]

    EmpiricalCounts() = default;
    EmpiricalCounts(int s, int a)
        : num_states(s), num_actions(a),
          triples(static_cast<std::size_t>(s) * a * s, 0),
          pairs(static_cast<std::size_t>(s) * a, 0) {}

    std::int64_t triple_count(int s, int a, int s2) const {
        return triples[(static_cast<std::size_t>(s) * num_actions + a) * num_states + s2];
    }
    std::int64_t pair_count(int s, int a) const {
        return pairs[static_cast<std::size_t>(s) * num_actions + a];
    }

    void record(int s, int a, int s2) {
        triples[(static_cast<std::size_t>(s) * num_actions + a) * num_states + s2]++;
        pairs[static_cast<std::size_t>(s) * num_actions + a]++;
    }

    void merge(const EmpiricalCounts& other) {
        if (other.num_states != num_states || other.num_actions != num_actions)
            throw std::invalid_argument("EmpiricalCounts::merge: dimension mismatch");
        for (std::size_t i = 0; i < triples.size(); ++i) triples[i] += other.triples[i];
        for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i] += other.pairs[i];
    }

    // N(s,a,.)/N(s,a), or the all-zero row when the pair was never visited
    std::vector<double> estimate_row(int s, int a) const {
        std::vector<double> row(num_states, 0.0);
        const std::int64_t n = pair_count(s, a);
        if (n > 0)
            for (int s2 = 0; s2 < num_states; ++s2)
                row[s2] = static_cast<double>(triple_count(s, a, s2)) / static_cast<double>(n);
        return row;
    }
};

}  // namespace mtrl
