#pragma once

#include <cstdint>
#include <vector>

#include "mtrl/environments.hpp"
#include "mtrl/rng.hpp"
#include "mtrl/separability.hpp"

namespace mtrl {

enum class FlipAllocation { uniform_column_1, uniform_both, adaptive_successive_elimination };

struct FlipBudget {
    std::int64_t total = 1;
    FlipAllocation allocation = FlipAllocation::uniform_column_1;
};

enum class CoinClassifier { mle_col1, mle_joint };

// Flips coins under the given allocation and returns the predicted special
// row. mle_col1 picks the row with the most column-0 heads (ties to the
// smallest row); mle_joint sums standardized head-count evidence over both
// columns.
int run_coin_identification(const CoinInstance& instance, const FlipBudget& budget,
                            CoinClassifier classifier, Rng& rng);

struct SweepRow {
    double lam;
    std::int64_t budget;       // smallest budget reaching the target
    double success_rate;       // measured at that budget
};

// For each lambda, bisects over budgets to the smallest achieving
// target_success over `trials` Monte Carlo trials (theta drawn uniformly per
// trial). The log-log slope of budget against lambda estimates the scaling
// exponent.
std::vector<SweepRow> sweep_sample_complexity(int q, const std::vector<double>& lam_grid,
                                              double target_success, CoinClassifier classifier,
                                              Rng& rng, int trials = 500);

double loglog_slope(const std::vector<SweepRow>& rows);

// fraction of `trials` identifications that return the true row
double coin_success_rate(int q, double lam, double delta, std::int64_t budget,
                         FlipAllocation allocation, CoinClassifier classifier, Rng& rng,
                         int trials);

struct TwoJaoIdentificationRecord {
    std::int64_t total_steps = 0;
    std::int64_t left_samples = 0;  // hub flips of left-side actions
    int predicted = 0;
    bool correct = false;
};

// Round-robins the left-side actions from the hub of a 2-JAO MDP, waiting out
// excursions to the reward-free state, until the leading row's empirical exit
// rate beats the runner-up by lam/4 with at least ceil(8/lam^2) samples per
// row. Records the steps spent.
TwoJaoIdentificationRecord run_two_jao_identification(const ModelSet& set, int true_model,
                                                      Rng& rng);

}  // namespace mtrl
