#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mtrl/coinlab.hpp"
#include "mtrl/environments.hpp"
#include "mtrl/harness.hpp"
#include "mtrl/model_io.hpp"
#include "mtrl/passage.hpp"
#include "mtrl/separability.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;

int cmd_gen_env(const mtrl::EnvironmentSpec& spec, const std::string& out) {
    const mtrl::ModelSet set = mtrl::build_environment(spec);
    mtrl::save_model_set(set, out);
    std::cout << "wrote " << set.size() << " models (" << set.num_states() << " states, "
              << set.num_actions() << " actions) to " << out << "\n";
    return kExitOk;
}

int cmd_inspect(const std::string& file, bool show_lambda, bool show_diameter,
                double distinguishing_lam) {
    const mtrl::ModelSet set = mtrl::load_model_set(file);
    std::cout << "models: " << set.size() << "  states: " << set.num_states()
              << "  actions: " << set.num_actions() << "\n";
    for (const auto& m : set.models) std::cout << "  " << m.label << "\n";
    if (show_lambda || set.size() >= 2) {
        const double lam = mtrl::separation_level(set);
        std::cout << "separation level: " << mtrl::format_double(lam) << "\n";
    }
    if (show_diameter) {
        for (int i = 0; i < set.size(); ++i) {
            try {
                std::cout << "diameter[" << set.models[i].label
                          << "]: " << mtrl::format_double(mtrl::diameter(set.models[i])) << "\n";
            } catch (const mtrl::InfiniteDiameterError&) {
                std::cout << "diameter[" << set.models[i].label << "]: infinite\n";
            }
        }
    }
    if (distinguishing_lam > 0.0) {
        const auto gamma = mtrl::greedy_distinguishing_set(set, distinguishing_lam);
        std::cout << "distinguishing set at " << distinguishing_lam << " (size " << gamma.size()
                  << "):";
        for (const auto& [s, a] : gamma.pairs) std::cout << " (" << s << "," << a << ")";
        std::cout << "\n";
    }
    return kExitOk;
}

int cmd_run(const std::string& config_path, int seeds_override,
            std::int64_t h0_override) {
    mtrl::ExperimentConfig config = mtrl::load_experiment_config(config_path);
    if (seeds_override > 0) {
        config.seeds.clear();
        for (int i = 1; i <= seeds_override; ++i) config.seeds.push_back(i);
    }
    if (h0_override > 0) config.agent.h0_override = h0_override;
    const auto results = mtrl::run_experiment(config);
    const auto written = mtrl::emit_outputs(config, results);
    for (const auto& path : written) std::cout << "wrote " << path << "\n";
    return kExitOk;
}

int cmd_coin_lab(int q, const std::vector<double>& lambda_grid, double target, int trials,
                 std::uint64_t seed, const std::string& out) {
    mtrl::Rng rng(seed);
    const auto rows = mtrl::sweep_sample_complexity(q, lambda_grid, target,
                                                    mtrl::CoinClassifier::mle_col1, rng, trials);
    std::ofstream file(out, std::ios::binary);
    if (!file) throw std::runtime_error("coin-lab: cannot open " + out);
    file << "lambda,q,budget,success_rate,trials,seed\n";
    for (const auto& row : rows)
        file << mtrl::format_double(row.lam) << ',' << q << ',' << row.budget << ','
             << mtrl::format_double(row.success_rate) << ',' << trials << ',' << seed << '\n';
    if (rows.size() >= 2)
        std::cout << "log-log slope: " << mtrl::format_double(mtrl::loglog_slope(rows)) << "\n";
    std::cout << "wrote " << out << "\n";
    return kExitOk;
}

int cmd_plot_data(const std::vector<std::string>& inputs, const std::string& out) {
    // group per-seed metrics by run id, average APER per episode
    std::map<std::string, std::vector<std::vector<double>>> apers_by_run;
    std::size_t episodes = 0;
    for (const auto& path : inputs) {
        std::string run_id;
        std::uint64_t seed = 0;
        const auto rows = mtrl::parse_metrics_csv(path, &run_id, &seed);
        std::vector<double> aper(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) aper[i] = rows[i].aper;
        episodes = std::max(episodes, aper.size());
        apers_by_run[run_id].push_back(std::move(aper));
    }
    std::ofstream file(out, std::ios::binary);
    if (!file) throw std::runtime_error("plot-data: cannot open " + out);
    file << "episode";
    for (const auto& [run_id, _] : apers_by_run) file << ',' << run_id << "_aper_mean";
    file << '\n';
    for (std::size_t k = 0; k < episodes; ++k) {
        file << (k + 1);
        for (const auto& [run_id, seeds] : apers_by_run) {
            double sum = 0.0;
            int n = 0;
            for (const auto& aper : seeds)
                if (k < aper.size()) {
                    sum += aper[k];
                    ++n;
                }
            file << ',' << (n > 0 ? mtrl::format_double(sum / n) : "");
        }
        file << '\n';
    }
    std::cout << "wrote " << out << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-task tabular RL simulation toolkit"};
    app.require_subcommand(1);

    // gen-env
    auto* gen = app.add_subcommand("gen-env", "generate a model set and write it as JSON");
    mtrl::EnvironmentSpec env_spec;
    std::string gen_out;
    gen->add_option("--family", env_spec.family,
                    "gridworld|jao|two-jao|noncomm-two-jao|counterexample")
        ->required();
    gen->add_option("--models", env_spec.models, "number of models (jao)");
    gen->add_option("--actions", env_spec.actions, "actions per model (jao)");
    gen->add_option("--delta", env_spec.delta, "exit probability (jao)");
    gen->add_option("--lambda", env_spec.lam, "separation level parameter");
    gen->add_option("--q", env_spec.q, "actions per side (two-jao)");
    gen->add_option("--d", env_spec.d, "diameter parameter (two-jao)");
    gen->add_option("--horizon", env_spec.h, "horizon parameter (two-jao)");
    gen->add_option("--out", gen_out, "output file")->required();

    // inspect
    auto* inspect = app.add_subcommand("inspect", "print separability analytics of a model set");
    std::string inspect_file;
    bool show_lambda = false, show_diameter = false;
    double distinguishing_lam = 0.0;
    inspect->add_option("file", inspect_file, "model set JSON")->required();
    inspect->add_flag("--lambda", show_lambda, "print the separation level");
    inspect->add_flag("--diameter", show_diameter, "print per-model diameters");
    inspect->add_option("--distinguishing-set", distinguishing_lam,
                        "print a greedy distinguishing set at this level");

    // run
    auto* run = app.add_subcommand("run", "run a seeded experiment from a config file");
    std::string config_path;
    int seeds_override = 0;
    std::int64_t h0_override = 0;
    run->add_option("--config", config_path, "experiment config JSON")->required();
    run->add_option("--seeds", seeds_override, "replace config seeds with 1..N");
    run->add_option("--h0-override", h0_override, "override the clustering-phase step budget");

    // coin-lab
    auto* coin = app.add_subcommand("coin-lab", "sample-complexity sweep for the coin table");
    int coin_q = 12;
    std::vector<double> lambda_grid;
    double coin_target = 0.9;
    int coin_trials = 500;
    std::uint64_t coin_seed = 1;
    std::string coin_out;
    coin->add_option("--q", coin_q, "number of rows")->required();
    coin->add_option("--lambda-grid", lambda_grid, "lambda values")->required()->expected(-1);
    coin->add_option("--target", coin_target, "target success rate");
    coin->add_option("--trials", coin_trials, "Monte Carlo trials per probe");
    coin->add_option("--seed", coin_seed, "random seed");
    coin->add_option("--out", coin_out, "output CSV")->required();

    // plot-data
    auto* plot = app.add_subcommand("plot-data", "aggregate metrics CSVs for plotting");
    std::vector<std::string> plot_inputs;
    std::string plot_out;
    plot->add_option("--in", plot_inputs, "input metrics CSVs")->required()->expected(-1);
    plot->add_option("--out", plot_out, "output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (gen->parsed()) return cmd_gen_env(env_spec, gen_out);
        if (inspect->parsed())
            return cmd_inspect(inspect_file, show_lambda, show_diameter, distinguishing_lam);
        if (run->parsed()) return cmd_run(config_path, seeds_override, h0_override);
        if (coin->parsed())
            return cmd_coin_lab(coin_q, lambda_grid, coin_target, coin_trials, coin_seed,
                                coin_out);
        if (plot->parsed()) return cmd_plot_data(plot_inputs, plot_out);
    } catch (const mtrl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitConfig;
}
