#include "mtrl/coinlab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mtrl {

namespace {

struct FlipCounts {
    std::vector<std::int64_t> flips;  // [row][col]
    std::vector<std::int64_t> heads;

    explicit FlipCounts(int q) : flips(static_cast<std::size_t>(q) * 2, 0),
                                 heads(static_cast<std::size_t>(q) * 2, 0) {}

    void record(int row, int col, bool head) {
        flips[static_cast<std::size_t>(row) * 2 + col]++;
        if (head) heads[static_cast<std::size_t>(row) * 2 + col]++;
    }
    std::int64_t n(int row, int col) const {
        return flips[static_cast<std::size_t>(row) * 2 + col];
    }
    std::int64_t h(int row, int col) const {
        return heads[static_cast<std::size_t>(row) * 2 + col];
    }
};

bool flip(const CoinInstance& inst, int row, int col, Rng& rng) {
    return rng.next_bernoulli(inst.mean(row, col));
}

void run_allocation(const CoinInstance& inst, const FlipBudget& budget, FlipCounts& counts,
                    Rng& rng) {
    const int q = inst.q;
    switch (budget.allocation) {
        case FlipAllocation::uniform_column_1: {
            for (std::int64_t t = 0; t < budget.total; ++t) {
                const int row = static_cast<int>(t % q);
                counts.record(row, 0, flip(inst, row, 0, rng));
            }
            break;
        }
        case FlipAllocation::uniform_both: {
            for (std::int64_t t = 0; t < budget.total; ++t) {
                const int row = static_cast<int>((t / 2) % q);
                const int col = static_cast<int>(t % 2);
                counts.record(row, col, flip(inst, row, col, rng));
            }
            break;
        }
        case FlipAllocation::adaptive_successive_elimination: {
            // rounds of one column-0 flip per surviving row; rows whose upper
            // confidence bound falls below the leader's lower bound drop out
            std::vector<int> active(q);
            for (int r = 0; r < q; ++r) active[r] = r;
            std::int64_t used = 0;
            while (used < budget.total && active.size() > 1) {
                for (std::size_t i = 0; i < active.size() && used < budget.total; ++i) {
                    const int row = active[i];
                    counts.record(row, 0, flip(inst, row, 0, rng));
                    ++used;
                }
                double best_lcb = -1.0;
                for (int row : active) {
                    const double n = static_cast<double>(counts.n(row, 0));
                    const double mean = static_cast<double>(counts.h(row, 0)) / n;
                    const double rad = std::sqrt(std::log(4.0 * q * n) / (2.0 * n));
                    best_lcb = std::max(best_lcb, mean - rad);
                }
                std::vector<int> kept;
                for (int row : active) {
                    const double n = static_cast<double>(counts.n(row, 0));
                    const double mean = static_cast<double>(counts.h(row, 0)) / n;
                    const double rad = std::sqrt(std::log(4.0 * q * n) / (2.0 * n));
                    if (mean + rad >= best_lcb) kept.push_back(row);
                }
                active.swap(kept);
            }
            break;
        }
    }
}

int classify(const CoinInstance& inst, const FlipCounts& counts, CoinClassifier classifier) {
    const int q = inst.q;
    if (classifier == CoinClassifier::mle_col1) {
        std::int64_t best = -1;
        int best_row = 0;
        for (int r = 0; r < q; ++r) {
            if (counts.h(r, 0) > best) {
                best = counts.h(r, 0);
                best_row = r;
            }
        }
        return best_row;
    }
    // mle_joint: standardized excess head counts against the baseline means
    double best = -std::numeric_limits<double>::infinity();
    int best_row = 0;
    const double base[2] = {0.5, inst.delta};
    for (int r = 0; r < q; ++r) {
        double z = 0.0;
        for (int c = 0; c < 2; ++c) {
            const std::int64_t n = counts.n(r, c);
            if (n == 0) continue;
            const double expected = static_cast<double>(n) * base[c];
            const double sd = std::sqrt(static_cast<double>(n) * base[c] * (1.0 - base[c]));
            z += (static_cast<double>(counts.h(r, c)) - expected) / sd;
        }
        if (z > best) {
            best = z;
            best_row = r;
        }
    }
    return best_row;
}

}  // namespace

int run_coin_identification(const CoinInstance& instance, const FlipBudget& budget,
                            CoinClassifier classifier, Rng& rng) {
    if (budget.total < 1) throw std::invalid_argument("run_coin_identification: empty budget");
    if (instance.q == 1) return 0;
    FlipCounts counts(instance.q);
    run_allocation(instance, budget, counts, rng);
    return classify(instance, counts, classifier);
}

double coin_success_rate(int q, double lam, double delta, std::int64_t budget,
                         FlipAllocation allocation, CoinClassifier classifier, Rng& rng,
                         int trials) {
    int correct = 0;
    for (int t = 0; t < trials; ++t) {
        const int theta = static_cast<int>(rng.next_below(q));
        const CoinInstance inst = make_coin_instance(q, lam, delta, budget, theta);
        if (run_coin_identification(inst, {budget, allocation}, classifier, rng) == theta)
            ++correct;
    }
    return static_cast<double>(correct) / trials;
}

std::vector<SweepRow> sweep_sample_complexity(int q, const std::vector<double>& lam_grid,
                                              double target_success, CoinClassifier classifier,
                                              Rng& rng, int trials) {
    if (target_success <= 0.5 || target_success >= 1.0)
        throw std::invalid_argument("sweep_sample_complexity: target in (0.5, 1)");
    const double delta = 0.25;
    std::vector<SweepRow> rows;
    for (double lam : lam_grid) {
        std::int64_t lo = std::max<std::int64_t>(q, 1);
        double rate_lo =
            coin_success_rate(q, lam, delta, lo, FlipAllocation::uniform_column_1, classifier,
                              rng, trials);
        if (rate_lo >= target_success) {
            rows.push_back({lam, lo, rate_lo});
            continue;
        }
        std::int64_t hi = lo;
        double rate_hi = rate_lo;
        for (int i = 0; i < 48 && rate_hi < target_success; ++i) {
            hi *= 2;
            rate_hi = coin_success_rate(q, lam, delta, hi, FlipAllocation::uniform_column_1,
                                        classifier, rng, trials);
        }
        while (hi - lo > std::max<std::int64_t>(1, hi / 50)) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            const double rate =
                coin_success_rate(q, lam, delta, mid, FlipAllocation::uniform_column_1,
                                  classifier, rng, trials);
            if (rate >= target_success) {
                hi = mid;
                rate_hi = rate;
            } else {
                lo = mid;
            }
        }
        rows.push_back({lam, hi, rate_hi});
    }
    return rows;
}

double loglog_slope(const std::vector<SweepRow>& rows) {
    if (rows.size() < 2) throw std::invalid_argument("loglog_slope: need at least two points");
    double sx = 0, sy = 0;
    for (const auto& r : rows) {
        sx += std::log(r.lam);
        sy += std::log(static_cast<double>(r.budget));
    }
    const double mx = sx / rows.size(), my = sy / rows.size();
    double num = 0, den = 0;
    for (const auto& r : rows) {
        const double dx = std::log(r.lam) - mx;
        num += dx * (std::log(static_cast<double>(r.budget)) - my);
        den += dx * dx;
    }
    return num / den;
}

TwoJaoIdentificationRecord run_two_jao_identification(const ModelSet& set, int true_model,
                                                      Rng& rng) {
    TwoJaoIdentificationRecord record;
    if (set.size() < 2) {
        record.correct = true;
        return record;
    }
    if (!set.lam) throw std::invalid_argument("run_two_jao_identification: set lacks lam");
    const MdpModel& env = set.models.at(true_model);
    const int q = env.num_actions() / 2;
    const double lam = *set.lam;
    const std::int64_t n_min = static_cast<std::int64_t>(std::ceil(8.0 / (lam * lam)));

    std::vector<std::int64_t> flips(q, 0), exits(q, 0);
    int s = 0;
    int next_row = 0;
    const std::int64_t step_cap = 1'000'000'000;
    while (true) {
        if (record.total_steps > step_cap)
            throw std::runtime_error("run_two_jao_identification: step cap exceeded");
        if (s == 0) {
            const int row = next_row;
            next_row = (next_row + 1) % q;
            const int a = q + row;  // left-side action
            const int s2 = sample_transition(env, s, a, rng);
            ++record.total_steps;
            ++flips[row];
            ++record.left_samples;
            if (s2 == 2) ++exits[row];
            s = s2;

            std::int64_t min_n = flips[0];
            for (int r = 1; r < q; ++r) min_n = std::min(min_n, flips[r]);
            if (min_n >= n_min) {
                double best = -1.0, second = -1.0;
                int best_row = 0;
                for (int r = 0; r < q; ++r) {
                    const double rate = static_cast<double>(exits[r]) /
                                        static_cast<double>(flips[r]);
                    if (rate > best) {
                        second = best;
                        best = rate;
                        best_row = r;
                    } else if (rate > second) {
                        second = rate;
                    }
                }
                if (best - second >= lam / 4.0) {
                    record.predicted = best_row;
                    record.correct = best_row == true_model;
                    return record;
                }
            }
        } else {
            // wait out the excursion; any action returns with the same rate
            s = sample_transition(env, s, 0, rng);
            ++record.total_steps;
        }
    }
}

}  // namespace mtrl
