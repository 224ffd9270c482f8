#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mtrl/aomrl.hpp"
#include "mtrl/schedule.hpp"
#include "mtrl/separability.hpp"

namespace mtrl {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EnvironmentSpec {
    std::string family = "gridworld";  // gridworld|jao|two-jao|noncomm-two-jao|counterexample|file
    std::string file_path;
    int models = 2;
    int actions = 4;
    double delta = 0.25;
    double lam = 0.5;
    int q = 12;
    double d = 16.0;
    std::int64_t h = 10000;
};

ModelSet build_environment(const EnvironmentSpec& spec);

struct ScheduleSpec {
    std::string kind = "paper";  // uniform|paper|all-models-first-paper|file
    int episodes = 200;
    int start = 5;
    std::vector<int> subset;  // uniform over these model indices
    std::string file_path;
};

TaskSchedule build_schedule(const ScheduleSpec& spec, int num_models, int num_states, Rng& rng);

struct AgentSpec {
    std::string kind = "aomrl1";  // aomrl1|aomrl2|ucbvi-one-episode|random|optimal
    double failure_prob = 0.03;
    std::int64_t learning_horizon = 200;  // H1
    std::optional<std::int64_t> h0_override;
    std::optional<std::int64_t> stage1_h0_override;  // aomrl2 stage 1
    std::optional<double> lam_override;
    std::optional<double> dtilde_override;
    std::optional<double> alpha;               // defaults to lam
    std::vector<std::pair<int, int>> gamma;    // aomrl1; empty -> greedy from true kernels
    bool exclude_clustering_samples = true;    // evaluation ignores clustering-phase samples
    bool pool_learning_counts = false;
    bool h1_only = false;                      // baselines interact for H1 steps only
    std::optional<std::int64_t> interaction_budget;  // baselines; required unless h1_only
    double bonus_scale = 7.0;
    bool tight_value_cap = false;
};

struct ExperimentConfig {
    std::string run_id = "run";
    EnvironmentSpec env;
    ScheduleSpec schedule;
    AgentSpec agent;
    std::vector<std::uint64_t> seeds = {1};
    int eval_horizon = 200;
    std::string output_dir = ".";

    void validate() const;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

struct MetricsRow {
    int episode = 0;  // 1-based
    int model_true = 0;
    int cluster_id = 0;        // 1-based; 0 for agents without clusters
    bool cluster_correct = true;
    bool explored_ok = true;
    double realized_return = 0.0;
    double eval_return = 0.0;
    double regret = 0.0;
    bool regret_is_proxy = false;
    double aper = 0.0;
};

struct SeedResult {
    std::uint64_t seed = 0;
    std::vector<MetricsRow> rows;
};

// Runs every seed (in parallel; each seed's episode loop is sequential and
// fully determined by the seed) and returns results in seed order.
std::vector<SeedResult> run_experiment(const ExperimentConfig& config);

// CSV schema:
// run_id,seed,episode,model_true,cluster_id,cluster_correct,explored_ok,
// realized_return,eval_return,regret,regret_is_proxy,aper
void write_metrics_csv(const std::string& run_id, const SeedResult& result,
                       const std::string& path);
std::vector<MetricsRow> parse_metrics_csv(const std::string& path, std::string* run_id = nullptr,
                                          std::uint64_t* seed = nullptr);

// per-seed CSVs, an aggregate CSV (mean/std across seeds per episode) and a
// plot-data file (episode, mean APER); returns the written paths
std::vector<std::string> emit_outputs(const ExperimentConfig& config,
                                      const std::vector<SeedResult>& results);

// mean APER per episode across seeds
std::vector<double> mean_aper(const std::vector<SeedResult>& results);

// shortest round-trip decimal form, used for byte-stable CSV output
std::string format_double(double v);

}  // namespace mtrl
