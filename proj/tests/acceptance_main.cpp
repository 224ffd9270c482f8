// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances and thresholds are pinned in code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <string>
#include <vector>

#include "mtrl/aomrl.hpp"
#include "mtrl/coinlab.hpp"
#include "mtrl/dp.hpp"
#include "mtrl/environments.hpp"
#include "mtrl/harness.hpp"
#include "mtrl/schedule.hpp"
#include "mtrl/separability.hpp"
#include "mtrl/ucbvi.hpp"

using namespace mtrl;

namespace {

int g_failures = 0;

void report(int number, const std::string& description, bool pass, const std::string& detail,
            double seconds) {
    std::printf("%s criterion %2d: %s (%s; %.2fs)\n", pass ? "PASS" : "FAIL", number,
                description.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void run_criterion(int number, const std::string& description,
                   const std::function<std::pair<bool, std::string>()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        std::tie(pass, detail) = body();
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(number, description, pass, detail, seconds);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

bool covers_all_pairs(const ModelSet& set, const StateActionSet& gamma, double level) {
    for (int i = 0; i < set.size(); ++i) {
        for (int j = i + 1; j < set.size(); ++j) {
            bool covered = false;
            for (const auto& [s, a] : gamma.pairs)
                covered |= l1_distance(set.models[i].kernel.row(s, a),
                                       set.models[j].kernel.row(s, a)) >= level;
            if (!covered) return false;
        }
    }
    return true;
}

// shared experiment setup for the figure reproduction
constexpr int kEpisodes = 200;
constexpr int kEvalHorizon = 200;
// paper-faithful bonus 7*H*L saturates the clipped Q table at desk scale;
// the experiment configs use this practical scale and the tight H-h value
// cap instead (README)
constexpr double kBonusScale = 1e-3;
constexpr bool kTightCap = true;

ExperimentConfig base_grid_config(const std::string& run_id, const std::string& agent_kind) {
    ExperimentConfig config;
    config.run_id = run_id;
    config.env.family = "gridworld";
    config.schedule.kind = "paper";
    config.schedule.episodes = kEpisodes;
    config.agent.kind = agent_kind;
    config.agent.failure_prob = 0.03;
    config.agent.learning_horizon = kEvalHorizon;
    config.agent.bonus_scale = kBonusScale;
    config.agent.tight_value_cap = kTightCap;
    config.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    config.eval_horizon = kEvalHorizon;
    if (agent_kind == "aomrl1") {
        config.agent.gamma = {{1, 0}, {8, 3}, {2, 1}};
    } else {
        config.agent.h1_only = true;
    }
    return config;
}

// One pass over the full 10-seed cluster-then-learn experiment at the
// closed-form clustering budget; feeds criteria 6 and 7.
struct SharedAomrlRun {
    int total_episodes = 0;
    int correct_episodes = 0;
    int good_events = 0;
    int implication_violations = 0;
    int explored_failures = 0;
    std::vector<double> mean_aper;
};

const SharedAomrlRun& shared_aomrl_run() {
    static const SharedAomrlRun run = [] {
        const ModelSet grid = make_gridworld_set();
        const double lam = *grid.lam;

        struct SeedOutcome {
            int correct = 0, good = 0, violations = 0, explored_failures = 0;
            std::vector<double> aper;
        };
        const auto run_one_seed = [&](std::uint64_t seed) {
            Rng master(seed);
            Rng schedule_rng = master.fork();
            Rng agent_rng = master.fork();
            const TaskSchedule schedule = paper_schedule(kEpisodes, schedule_rng);

            AomrlConfig cfg;
            cfg.num_models = 4;
            cfg.num_episodes = kEpisodes;
            cfg.num_states = 16;
            cfg.num_actions = 4;
            cfg.dtilde = 7.0;
            cfg.lam = lam;
            cfg.alpha = lam;
            cfg.failure_prob = 0.03;
            cfg.gamma = StateActionSet::from_pairs({{1, 0}, {8, 3}, {2, 1}}, 16, 4);
            cfg.bonus_scale = kBonusScale;
            cfg.tight_value_cap = kTightCap;
            cfg.horizon = cfg.clustering_steps() + kEvalHorizon;  // closed-form H0
            AomrlAgent agent(cfg);

            SeedOutcome out;
            double cumulative_eval = 0.0;
            std::vector<int> cluster_truth;
            std::vector<std::vector<int>> model_clusters(4);
            for (int k = 0; k < schedule.episodes(); ++k) {
                const int model = schedule.model_of(k);
                const int start = schedule.start_of(k);
                const MdpModel& env = grid.models[model];
                const auto ep = agent.run_episode(env, start, agent_rng);
                if (!ep.explored_ok) ++out.explored_failures;

                bool good = true;
                for (std::size_t i = 0; i < cfg.gamma.pairs.size(); ++i) {
                    const auto& [s, a] = cfg.gamma.pairs[i];
                    if (l1_distance(ep.episode_gamma_rows[i], env.kernel.row(s, a)) >
                        lam / 8.0)
                        good = false;
                }
                for (std::size_t c = 0; c < ep.cluster_gamma_rows.size() && good; ++c) {
                    const MdpModel& tm = grid.models[cluster_truth[c]];
                    for (std::size_t i = 0; i < cfg.gamma.pairs.size(); ++i) {
                        const auto& [s, a] = cfg.gamma.pairs[i];
                        if (l1_distance(ep.cluster_gamma_rows[c][i], tm.kernel.row(s, a)) >
                            lam / 8.0)
                            good = false;
                    }
                }
                if (good) {
                    ++out.good;
                    int expected = 0;
                    for (std::size_t c = 0; c < cluster_truth.size(); ++c)
                        if (cluster_truth[c] == model) expected = static_cast<int>(c) + 1;
                    const int forced = expected == 0 ? agent.store().size() : expected;
                    if (ep.cluster_id != forced || ep.new_cluster != (expected == 0))
                        ++out.violations;
                }

                if (ep.new_cluster) cluster_truth.push_back(model);
                auto& clusters = model_clusters[model];
                if (std::find(clusters.begin(), clusters.end(), ep.cluster_id) ==
                    clusters.end())
                    clusters.push_back(ep.cluster_id);
                if (cluster_truth[ep.cluster_id - 1] == model && clusters.size() == 1 &&
                    std::count(cluster_truth.begin(), cluster_truth.end(), model) == 1)
                    ++out.correct;

                // evaluation protocol: certainty-equivalent plan over the
                // cluster's learning-phase samples, scored on the true model
                const auto& cluster = agent.store().clusters[ep.cluster_id - 1];
                const auto [values, policy] =
                    estimate_greedy_policy(cluster.regret_counts, env.reward, kEvalHorizon);
                cumulative_eval += evaluate_policy(env, policy, start);
                out.aper.push_back(cumulative_eval / (k + 1));
            }
            return out;
        };

        std::vector<std::future<SeedOutcome>> futures;
        for (std::uint64_t seed = 1; seed <= 10; ++seed)
            futures.push_back(std::async(std::launch::async, run_one_seed, seed));

        SharedAomrlRun total;
        total.mean_aper.assign(kEpisodes, 0.0);
        for (auto& f : futures) {
            const SeedOutcome out = f.get();
            total.total_episodes += kEpisodes;
            total.correct_episodes += out.correct;
            total.good_events += out.good;
            total.implication_violations += out.violations;
            total.explored_failures += out.explored_failures;
            for (int k = 0; k < kEpisodes; ++k) total.mean_aper[k] += out.aper[k] / 10.0;
        }
        return total;
    }();
    return run;
}

}  // namespace

int main() {
    // 1. gridworld separability
    run_criterion(1, "gridworld separation level 1.2999 +/- 5e-4, under 1s", [] {
        const auto t0 = std::chrono::steady_clock::now();
        const ModelSet grid = make_gridworld_set();
        const double lam = separation_level(grid);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = std::abs(lam - 1.2999) <= 5e-4 && secs < 1.0;
        return std::make_pair(pass, "level=" + fmt(lam) + " in " + fmt(secs) + "s");
    });

    // 2. published distinguishing sets
    run_criterion(2, "published distinguishing sets validate exactly", [] {
        const ModelSet grid = make_gridworld_set();
        const double lam = 1.2999;
        const auto full = StateActionSet::from_pairs({{1, 0}, {8, 3}, {2, 1}}, 16, 4);
        const auto half = StateActionSet::from_pairs({{11, 3}, {4, 2}, {13, 0}}, 16, 4);
        const bool a = covers_all_pairs(grid, full, lam);
        const bool b = covers_all_pairs(grid, half, lam / 2.0);
        const bool c = !covers_all_pairs(grid, half, lam);
        return std::make_pair(a && b && c,
                              std::string("lam-set=") + (a ? "ok" : "bad") +
                                  " half-set=" + (b ? "ok" : "bad") +
                                  " half-not-lam=" + (c ? "ok" : "bad"));
    });

    // 3. closed-form oracle equivalence
    run_criterion(3, "JAO closed form matches DP within 1e-9; mixing bound holds", [] {
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        bool mixing_ok = true;
        for (double delta : {0.05, 0.1, 0.2}) {
            for (double lam : {0.0, 0.2, 0.4}) {
                for (int horizon : {10, 100}) {
                    const MdpModel jao = make_jao({3, delta, lam, 0});
                    const auto [values, policy] = optimal_value_and_policy(jao, horizon);
                    const double closed = jao_optimal_value(delta, lam, horizon);
                    worst = std::max(worst, std::abs(values.at(0, 0) - closed));
                    const double rho = jao_optimal_average_reward(delta, lam);
                    mixing_ok &= std::abs(values.at(0, 0) - rho * horizon) <= 2.0 / delta;
                }
            }
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = worst <= 1e-9 && mixing_ok && secs < 5.0;
        return std::make_pair(pass, "max|dp-closed|=" + fmt(worst) + ", mixing " +
                                        (mixing_ok ? "ok" : "violated"));
    });

    // 4. concentration at the required visit count
    run_criterion(4, "l1 concentration: error <= lam/8 in >= 95% of 1000 trials", [] {
        const auto t0 = std::chrono::steady_clock::now();
        Rng rng(401);
        const double lam = 0.5;
        const std::int64_t n = required_visits(lam, 16, 0.05, 1, 1);
        int good = 0;
        const int trials = 1000;
        for (int t = 0; t < trials; ++t) {
            std::vector<double> p(16);
            double sum = 0.0;
            for (auto& v : p) {
                v = rng.next_unit() + 1e-3;
                sum += v;
            }
            for (auto& v : p) v /= sum;
            std::vector<std::int64_t> counts(16, 0);
            for (std::int64_t i = 0; i < n; ++i) {
                const double u = rng.next_unit();
                double cum = 0.0;
                int idx = 15;
                for (int j = 0; j < 16; ++j) {
                    cum += p[j];
                    if (u < cum) {
                        idx = j;
                        break;
                    }
                }
                counts[idx]++;
            }
            double err = 0.0;
            for (int i = 0; i < 16; ++i)
                err += std::abs(p[i] - static_cast<double>(counts[i]) / static_cast<double>(n));
            if (err <= lam / 8.0) ++good;
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return std::make_pair(good >= 950 && secs < 10.0,
                              "N=" + std::to_string(n) + ", good=" + std::to_string(good) +
                                  "/1000");
    });

    // 5. merge inequality, exact arithmetic
    run_criterion(5, "sample-merge inequality exact on 1000 random instances", [] {
        Rng rng(501);
        const std::int64_t denom = 1000;
        int violations = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            const int support = 2 + static_cast<int>(rng.next_below(7));
            std::vector<std::int64_t> r(support, 0);
            for (std::int64_t i = 0; i < denom; ++i) r[rng.next_below(support)]++;
            const auto draw = [&](std::int64_t n) {
                std::vector<std::int64_t> c(support, 0);
                for (std::int64_t i = 0; i < n; ++i) {
                    const auto u = static_cast<std::int64_t>(rng.next_below(denom));
                    std::int64_t cum = 0;
                    for (int j = 0; j < support; ++j) {
                        cum += r[j];
                        if (u < cum) {
                            c[j]++;
                            break;
                        }
                    }
                }
                return c;
            };
            const auto err = [&](const std::vector<std::int64_t>& c, std::int64_t n) {
                std::int64_t e = 0;
                for (int j = 0; j < support; ++j) e += std::llabs(r[j] * n - c[j] * denom);
                return e;
            };
            const std::int64_t nx = 1 + static_cast<std::int64_t>(rng.next_below(50));
            const std::int64_t ny = 1 + static_cast<std::int64_t>(rng.next_below(50));
            const auto cx = draw(nx), cy = draw(ny);
            std::vector<std::int64_t> pooled(support);
            for (int j = 0; j < support; ++j) pooled[j] = cx[j] + cy[j];
            const std::int64_t ex = err(cx, nx), ey = err(cy, ny), ep = err(pooled, nx + ny);
            if (!(ep * nx <= ex * (nx + ny) || ep * ny <= ey * (nx + ny))) ++violations;
        }
        return std::make_pair(violations == 0,
                              "violations=" + std::to_string(violations) + "/1000");
    });

    // 6. clustering correctness over the full experiment (closed-form H0)
    run_criterion(6, "clustering >= 97% correct; good event forces the right cluster", [] {
        const SharedAomrlRun& run = shared_aomrl_run();
        const double accuracy =
            static_cast<double>(run.correct_episodes) / run.total_episodes;
        const bool pass = accuracy >= 0.97 && run.implication_violations == 0;
        return std::make_pair(
            pass, "accuracy=" + fmt(accuracy) + " (" + std::to_string(run.correct_episodes) +
                      "/" + std::to_string(run.total_episodes) +
                      "), good-event episodes=" + std::to_string(run.good_events) +
                      ", implication violations=" + std::to_string(run.implication_violations) +
                      ", exploration shortfalls=" + std::to_string(run.explored_failures));
    });

    // 7. figure reproduction (qualitative)
    run_criterion(7, "APER: beats one-episode UCBVI from ep 50; dip at 100; near-optimal", [] {
        const auto& aper_a = shared_aomrl_run().mean_aper;
        const auto ucbvi = run_experiment(base_grid_config("ucbvi", "ucbvi-one-episode"));
        const auto optimal = run_experiment(base_grid_config("optimal", "optimal"));
        const auto aper_u = mean_aper(ucbvi);
        const auto aper_o = mean_aper(optimal);

        bool dominates = true;
        int first_loss = -1;
        for (int k = 49; k < kEpisodes; ++k)
            if (!(aper_a[k] > aper_u[k])) {
                dominates = false;
                if (first_loss < 0) first_loss = k + 1;
            }
        const bool dip = aper_a[99] < aper_a[98];
        const double final_ratio = aper_a[kEpisodes - 1] / aper_o[kEpisodes - 1];
        const bool near_optimal = final_ratio >= 0.85;
        const bool pass = dominates && dip && near_optimal;
        std::string detail = "final aomrl=" + fmt(aper_a[kEpisodes - 1]) +
                             " ucbvi=" + fmt(aper_u[kEpisodes - 1]) +
                             " optimal=" + fmt(aper_o[kEpisodes - 1]) +
                             " ratio=" + fmt(final_ratio) + " dip@100=" + (dip ? "yes" : "no");
        if (!dominates) detail += " first-loss-episode=" + std::to_string(first_loss);
        return std::make_pair(pass, detail);
    });

    // 8. two-stage variant: stage-1 clusters and the discovered candidate set
    run_criterion(8, "stage 1 finds 4 clusters; discovered set small and lam/2-valid, 10/10", [] {
        const ModelSet grid = make_gridworld_set();
        const double lam = *grid.lam;
        int good_seeds = 0;
        std::string note;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            Rng master(seed);
            Rng schedule_rng = master.fork();
            Rng agent_rng = master.fork();
            const TaskSchedule schedule = all_models_first_schedule(
                4, 5, [&] { return paper_schedule(kEpisodes, schedule_rng); });

            UnknownGammaConfig cfg;
            cfg.num_models = 4;
            cfg.num_episodes = schedule.episodes();
            cfg.num_states = 16;
            cfg.num_actions = 4;
            cfg.dtilde = 7.0;
            cfg.lam = lam;
            cfg.failure_prob = 0.03;
            // stage-1 budget overridden for runtime; per-pair coverage at the
            // closed-form visit target is asserted below instead
            cfg.stage1_h0_override = 1200000;
            cfg.stage1_learning_horizon = 0;
            cfg.stage2_learning_horizon = kEvalHorizon;
            cfg.bonus_scale = kBonusScale;
            cfg.tight_value_cap = kTightCap;
            AomrlUnknownGammaAgent agent(cfg);

            bool seed_ok = true;
            for (int k = 0; k < 12; ++k) {  // stage 1 plus a few stage-2 episodes
                const int model = schedule.model_of(k);
                const auto ep =
                    agent.run_episode(grid.models[model], schedule.start_of(k), agent_rng);
                if (k < 4 && (ep.stage != 1 || !ep.explored_ok)) seed_ok = false;
                if (k >= 4 && ep.stage != 2) seed_ok = false;
            }
            seed_ok &= agent.stage1_agent().store().size() == 4;
            seed_ok &= agent.in_stage2();
            if (seed_ok) {
                const auto& gamma_hat = agent.gamma_hat();
                seed_ok &= gamma_hat.size() <= 6;
                seed_ok &= covers_all_pairs(grid, gamma_hat, lam / 2.0);
                if (seed == 1) {
                    note = "seed-1 gamma-hat:";
                    for (const auto& [s, a] : gamma_hat.pairs)
                        note += " (" + std::to_string(s) + "," + std::to_string(a) + ")";
                }
            }
            if (seed_ok) ++good_seeds;
        }
        return std::make_pair(good_seeds == 10,
                              std::to_string(good_seeds) + "/10 seeds; " + note);
    });

    // 9. single-task optimism and decreasing regret
    run_criterion(9, "UCBVI optimism >= 95%; last-quarter regret below first-quarter", [] {
        const ModelSet grid = make_gridworld_set();
        const MdpModel& env = grid.models[3];  // far corner: nontrivial exploration
        const int horizon = kEvalHorizon;
        const auto [vstar, pistar] = optimal_value_and_policy(env, horizon);
        const double v0 = vstar.at(0, 5);
        int optimistic = 0, episodes = 0;
        double first_quarter = 0.0, last_quarter = 0.0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            UcbviAgent agent(16, 4, kEpisodes, horizon, 0.03, kBonusScale, kTightCap);
            Rng rng(seed);
            for (int k = 0; k < kEpisodes; ++k) {
                const auto ep = agent.run_episode(env, 5, rng);
                ++episodes;
                if (ep.optimistic_value >= v0 - 1e-9) ++optimistic;
                const double regret = v0 - ep.realized_return;
                if (k < kEpisodes / 4) first_quarter += regret;
                if (k >= 3 * kEpisodes / 4) last_quarter += regret;
            }
        }
        const double rate = static_cast<double>(optimistic) / episodes;
        const bool pass = rate >= 0.95 && last_quarter < first_quarter;
        return std::make_pair(pass, "optimism=" + fmt(rate) + ", first-quarter regret=" +
                                        fmt(first_quarter / (5.0 * kEpisodes / 4)) +
                                        ", last-quarter=" +
                                        fmt(last_quarter / (5.0 * kEpisodes / 4)));
    });

    // 10. external samples
    run_criterion(10, "N=0 bit-identical to plain UCBVI; N=100 no worse in >= 8/10 seeds", [] {
        const ModelSet grid = make_gridworld_set();
        const MdpModel& env = grid.models[0];
        const int horizon = kEvalHorizon;
        const int episodes = 50;

        bool identical = true;
        for (std::uint64_t seed = 1; seed <= 3 && identical; ++seed) {
            UcbviAgent plain(16, 4, episodes, horizon, 0.03, kBonusScale, kTightCap);
            ExternalSamplesUcbviAgent ext(16, 4, episodes, horizon, 0.03, 0, kBonusScale,
                                          kTightCap);
            Rng ra(seed), rb(seed), oracle(seed + 1000);
            for (int k = 0; k < episodes && identical; ++k) {
                const auto ta = plain.run_episode(env, 5, ra);
                const auto tb = ext.run_episode(env, 5, rb, oracle);
                for (std::size_t i = 0; i < ta.trace.size(); ++i) {
                    if (ta.trace[i].action != tb.trace[i].action ||
                        ta.trace[i].next_state != tb.trace[i].next_state) {
                        identical = false;
                        break;
                    }
                }
            }
        }

        const auto [vstar, pistar] = optimal_value_and_policy(env, horizon);
        const double v0 = vstar.at(0, 5);
        int improved = 0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            double regret[2] = {0.0, 0.0};
            const std::int64_t ns[2] = {0, 100};
            for (int variant = 0; variant < 2; ++variant) {
                ExternalSamplesUcbviAgent agent(16, 4, episodes, horizon, 0.03, ns[variant],
                                                kBonusScale, kTightCap);
                Rng rng(seed), oracle(seed + 2000);
                for (int k = 0; k < episodes; ++k) {
                    const auto ep = agent.run_episode(env, 5, rng, oracle);
                    regret[variant] += v0 - ep.realized_return;
                }
            }
            if (regret[1] <= regret[0]) ++improved;
        }
        const bool pass = identical && improved >= 8;
        return std::make_pair(pass, std::string("bit-identical=") + (identical ? "yes" : "no") +
                                        ", improved seeds=" + std::to_string(improved) + "/10");
    });

    // 11. coin lab
    run_criterion(11, "coin lab: budget thresholds and 1/lam^2 scaling", [] {
        const auto t0 = std::chrono::steady_clock::now();
        Rng rng(1101);
        const int q = 12;
        const double lam = 0.25;
        const std::int64_t rich_budget = static_cast<std::int64_t>(50.0 * q / (lam * lam));
        const double rich =
            coin_success_rate(q, lam, 0.25, rich_budget, FlipAllocation::uniform_column_1,
                              CoinClassifier::mle_col1, rng, 500);
        const double poor = coin_success_rate(q, lam, 0.25, q, FlipAllocation::uniform_column_1,
                                              CoinClassifier::mle_col1, rng, 500);
        const auto rows = sweep_sample_complexity(q, {0.1, 0.2, 0.4}, 0.9,
                                                  CoinClassifier::mle_col1, rng, 500);
        const double slope = loglog_slope(rows);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass =
            rich >= 0.9 && poor <= 0.2 && slope >= -2.4 && slope <= -1.6 && secs < 60.0;
        return std::make_pair(pass, "rich=" + fmt(rich) + " poor=" + fmt(poor) +
                                        " slope=" + fmt(slope) + " budgets={" +
                                        std::to_string(rows[0].budget) + "," +
                                        std::to_string(rows[1].budget) + "," +
                                        std::to_string(rows[2].budget) + "}");
    });

    // 12. two-jao identification scalings
    run_criterion(12, "2-JAO identification scales in lam and D", [] {
        const int q = 12;
        const int trials = 100;
        const auto median_steps = [&](double lam, double d, std::uint64_t seed) {
            const ModelSet set = make_two_jao_set(q, d, 100000, lam);
            Rng rng(seed);
            std::vector<std::int64_t> steps;
            for (int t = 0; t < trials; ++t) {
                const int truth = static_cast<int>(rng.next_below(q));
                steps.push_back(run_two_jao_identification(set, truth, rng).total_steps);
            }
            std::sort(steps.begin(), steps.end());
            return static_cast<double>(steps[trials / 2]);
        };
        const double hard = median_steps(0.2, 16.0, 1201);
        const double easy = median_steps(1.0, 16.0, 1202);
        const double lam_ratio = hard / easy;
        const double d16 = median_steps(0.5, 16.0, 1203);
        const double d32 = median_steps(0.5, 32.0, 1204);
        const double d_ratio = d32 / d16;
        const bool pass = lam_ratio >= 10.0 && d_ratio >= 1.5 && d_ratio <= 2.5;
        return std::make_pair(pass, "lam-ratio=" + fmt(lam_ratio) + " (hard=" + fmt(hard) +
                                        ", easy=" + fmt(easy) + "), D-ratio=" + fmt(d_ratio));
    });

    // 13. determinism
    run_criterion(13, "identical config and seed give byte-identical CSV", [] {
        namespace fs = std::filesystem;
        ExperimentConfig config = base_grid_config("det", "aomrl1");
        config.schedule.episodes = 20;
        config.agent.h0_override = 12000;
        config.seeds = {11, 12};
        const auto dir = fs::temp_directory_path() / "mtrl_acceptance_det";
        fs::remove_all(dir);

        config.output_dir = (dir / "a").string();
        const auto paths_a = emit_outputs(config, run_experiment(config));
        config.output_dir = (dir / "b").string();
        const auto paths_b = emit_outputs(config, run_experiment(config));

        bool identical = paths_a.size() == paths_b.size();
        for (std::size_t i = 0; identical && i < paths_a.size(); ++i) {
            std::ifstream fa(paths_a[i], std::ios::binary), fb(paths_b[i], std::ios::binary);
            const std::string sa((std::istreambuf_iterator<char>(fa)),
                                 std::istreambuf_iterator<char>());
            const std::string sb((std::istreambuf_iterator<char>(fb)),
                                 std::istreambuf_iterator<char>());
            identical = sa == sb && !sa.empty();
        }
        fs::remove_all(dir);
        return std::make_pair(identical, std::to_string(paths_a.size()) + " files compared");
    });

    if (g_failures == 0)
        std::printf("all 13 criteria passed\n");
    else
        std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
