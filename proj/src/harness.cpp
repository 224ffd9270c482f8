#include "mtrl/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "mtrl/dp.hpp"
#include "mtrl/environments.hpp"
#include "mtrl/model_io.hpp"
#include "mtrl/ucbvi.hpp"

namespace mtrl {

using nlohmann::json;

ModelSet build_environment(const EnvironmentSpec& spec) {
    if (spec.family == "gridworld") return make_gridworld_set();
    if (spec.family == "jao") return make_jao_set(spec.models, spec.actions, spec.delta, spec.lam);
    if (spec.family == "two-jao") return make_two_jao_set(spec.q, spec.d, spec.h, spec.lam);
    if (spec.family == "noncomm-two-jao")
        return make_noncommunicating_two_jao_set(spec.q, spec.d, spec.h, spec.lam);
    if (spec.family == "counterexample") return make_counterexample_pair(spec.lam);
    if (spec.family == "file") return load_model_set(spec.file_path);
    throw ConfigError("unknown environment family '" + spec.family + "'");
}

TaskSchedule build_schedule(const ScheduleSpec& spec, int num_models, int num_states, Rng& rng) {
    if (spec.kind == "paper") return paper_schedule(spec.episodes, rng);
    if (spec.kind == "all-models-first-paper") {
        return all_models_first_schedule(num_models, spec.start, [&] {
            return paper_schedule(spec.episodes, rng);
        });
    }
    if (spec.kind == "uniform") {
        std::vector<int> subset = spec.subset;
        if (subset.empty())
            for (int m = 0; m < num_models; ++m) subset.push_back(m);
        return uniform_schedule(subset, spec.episodes, spec.start, rng);
    }
    if (spec.kind == "file") {
        TaskSchedule sched = load_schedule(spec.file_path);
        for (const auto& [m, s] : sched.entries)
            if (m < 0 || m >= num_models || s < 0 || s >= num_states)
                throw ConfigError("schedule file entry out of range");
        return sched;
    }
    throw ConfigError("unknown schedule kind '" + spec.kind + "'");
}

void ExperimentConfig::validate() const {
    if (seeds.empty()) throw ConfigError("config: at least one seed required");
    if (eval_horizon < 1) throw ConfigError("config: eval_horizon must be positive");
    if (agent.learning_horizon < 1)
        throw ConfigError("config: learning_horizon must be positive");
    const std::vector<std::string> kinds = {"aomrl1", "aomrl2", "ucbvi-one-episode", "random",
                                            "optimal"};
    if (std::find(kinds.begin(), kinds.end(), agent.kind) == kinds.end())
        throw ConfigError("config: unknown agent kind '" + agent.kind + "'");
    if ((agent.kind == "ucbvi-one-episode" || agent.kind == "random" ||
         agent.kind == "optimal") &&
        !agent.h1_only && !agent.interaction_budget)
        throw ConfigError("config: baseline agents need interaction_budget or h1_only");
}

namespace {

EnvironmentSpec parse_env(const json& j) {
    EnvironmentSpec spec;
    spec.family = j.value("family", spec.family);
    spec.file_path = j.value("file", spec.file_path);
    spec.models = j.value("models", spec.models);
    spec.actions = j.value("actions", spec.actions);
    spec.delta = j.value("delta", spec.delta);
    spec.lam = j.value("lambda", spec.lam);
    spec.q = j.value("q", spec.q);
    spec.d = j.value("d", spec.d);
    spec.h = j.value("h", spec.h);
    return spec;
}

ScheduleSpec parse_schedule(const json& j) {
    ScheduleSpec spec;
    spec.kind = j.value("kind", spec.kind);
    spec.episodes = j.value("episodes", spec.episodes);
    spec.start = j.value("start", spec.start);
    if (j.contains("subset")) spec.subset = j.at("subset").get<std::vector<int>>();
    spec.file_path = j.value("file", spec.file_path);
    return spec;
}

AgentSpec parse_agent(const json& j) {
    AgentSpec spec;
    spec.kind = j.value("kind", spec.kind);
    spec.failure_prob = j.value("failure_prob", spec.failure_prob);
    spec.learning_horizon = j.value("learning_horizon", spec.learning_horizon);
    if (j.contains("h0_override")) spec.h0_override = j.at("h0_override").get<std::int64_t>();
    if (j.contains("stage1_h0_override"))
        spec.stage1_h0_override = j.at("stage1_h0_override").get<std::int64_t>();
    if (j.contains("lambda")) spec.lam_override = j.at("lambda").get<double>();
    if (j.contains("dtilde")) spec.dtilde_override = j.at("dtilde").get<double>();
    if (j.contains("alpha")) spec.alpha = j.at("alpha").get<double>();
    if (j.contains("gamma"))
        for (const auto& pair : j.at("gamma"))
            spec.gamma.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
    spec.exclude_clustering_samples =
        j.value("exclude_clustering_samples", spec.exclude_clustering_samples);
    spec.pool_learning_counts = j.value("pool_learning_counts", spec.pool_learning_counts);
    spec.h1_only = j.value("h1_only", spec.h1_only);
    if (j.contains("interaction_budget"))
        spec.interaction_budget = j.at("interaction_budget").get<std::int64_t>();
    spec.bonus_scale = j.value("bonus_scale", spec.bonus_scale);
    spec.tight_value_cap = j.value("tight_value_cap", spec.tight_value_cap);
    return spec;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    try {
        ExperimentConfig config;
        config.run_id = doc.value("run_id", config.run_id);
        if (doc.contains("environment")) config.env = parse_env(doc.at("environment"));
        if (doc.contains("schedule")) config.schedule = parse_schedule(doc.at("schedule"));
        if (doc.contains("agent")) config.agent = parse_agent(doc.at("agent"));
        if (doc.contains("seeds"))
            config.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
        config.eval_horizon = doc.value("eval_horizon", config.eval_horizon);
        config.output_dir = doc.value("output_dir", config.output_dir);
        config.validate();
        return config;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_experiment_config(text);
}

namespace {

// True-model optimal values for the regret column; shared across seed threads.
class OracleValues {
public:
    double value(const ModelSet& set, int model, std::int64_t horizon, int start) {
        const auto key = std::make_pair(model, horizon);
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(key);
        if (it == cache_.end())
            it = cache_.emplace(key, optimal_start_values(set.models[model], horizon)).first;
        return it->second[start];
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, std::int64_t>, std::vector<double>> cache_;
};

struct ClusterBookkeeping {
    std::vector<std::vector<int>> cluster_truths;  // models seen per cluster
    std::vector<std::vector<int>> model_clusters;  // clusters seen per model

    void reset() {
        cluster_truths.clear();
        model_clusters.clear();
    }

    bool record_and_check(int cluster_id, int model, int num_models) {
        if (static_cast<int>(cluster_truths.size()) < cluster_id)
            cluster_truths.resize(cluster_id);
        if (static_cast<int>(model_clusters.size()) < num_models)
            model_clusters.resize(num_models);
        auto& truths = cluster_truths[cluster_id - 1];
        if (std::find(truths.begin(), truths.end(), model) == truths.end())
            truths.push_back(model);
        auto& clusters = model_clusters[model];
        if (std::find(clusters.begin(), clusters.end(), cluster_id) == clusters.end())
            clusters.push_back(cluster_id);
        return truths.size() == 1 && clusters.size() == 1;
    }
};

double evaluate_learned(const EmpiricalCounts& counts, const MdpModel& env, int eval_horizon,
                        int start) {
    const auto [values, policy] = estimate_greedy_policy(counts, env.reward, eval_horizon);
    return evaluate_policy(env, policy, start);
}

AomrlConfig make_aomrl1_config(const AgentSpec& a, const ModelSet& set, int episodes,
                               double lam, double dtilde) {
    AomrlConfig cfg;
    cfg.num_models = set.size();
    cfg.num_episodes = episodes;
    cfg.num_states = set.num_states();
    cfg.num_actions = set.num_actions();
    cfg.dtilde = dtilde;
    cfg.lam = lam;
    cfg.alpha = a.alpha.value_or(lam);
    cfg.failure_prob = a.failure_prob;
    cfg.pool_learning_counts = a.pool_learning_counts;
    cfg.gamma = a.gamma.empty()
                    ? greedy_distinguishing_set(set, lam)
                    : StateActionSet::from_pairs(a.gamma, cfg.num_states, cfg.num_actions);
    cfg.h0_override = a.h0_override;
    cfg.bonus_scale = a.bonus_scale;
    cfg.tight_value_cap = a.tight_value_cap;
    cfg.horizon = cfg.clustering_steps() + a.learning_horizon;
    return cfg;
}

UnknownGammaConfig make_aomrl2_config(const AgentSpec& a, const ModelSet& set, int episodes,
                                      double lam, double dtilde) {
    UnknownGammaConfig cfg;
    cfg.num_models = set.size();
    cfg.num_episodes = episodes;
    cfg.num_states = set.num_states();
    cfg.num_actions = set.num_actions();
    cfg.dtilde = dtilde;
    cfg.lam = lam;
    cfg.failure_prob = a.failure_prob;
    cfg.stage1_h0_override = a.stage1_h0_override;
    cfg.stage2_h0_override = a.h0_override;
    cfg.stage1_learning_horizon = 0;
    cfg.stage2_learning_horizon = a.learning_horizon;
    cfg.pool_learning_counts = a.pool_learning_counts;
    cfg.bonus_scale = a.bonus_scale;
    cfg.tight_value_cap = a.tight_value_cap;
    return cfg;
}

SeedResult run_seed(const ExperimentConfig& config, const ModelSet& set, std::uint64_t seed,
                    OracleValues& oracle) {
    Rng master(seed);
    Rng schedule_rng = master.fork();
    Rng agent_rng = master.fork();

    const TaskSchedule schedule =
        build_schedule(config.schedule, set.size(), set.num_states(), schedule_rng);

    const AgentSpec& a = config.agent;
    const double lam = a.lam_override.value_or(set.lam.value_or(0.0));
    const double dtilde = a.dtilde_override.value_or(set.dtilde.value_or(0.0));
    const std::int64_t h1 = a.learning_horizon;

    SeedResult result;
    result.seed = seed;
    ClusterBookkeeping books;
    double cumulative_eval = 0.0;

    const auto push_row = [&](int episode_idx, int model, int cluster_id, bool cluster_correct,
                              bool explored_ok, double realized, double eval_return,
                              double regret, bool proxy) {
        cumulative_eval += eval_return;
        MetricsRow row;
        row.episode = episode_idx + 1;
        row.model_true = model;
        row.cluster_id = cluster_id;
        row.cluster_correct = cluster_correct;
        row.explored_ok = explored_ok;
        row.realized_return = realized;
        row.eval_return = eval_return;
        row.regret = regret;
        row.regret_is_proxy = proxy;
        row.aper = cumulative_eval / (episode_idx + 1);
        result.rows.push_back(row);
    };

    if (a.kind == "aomrl1") {
        AomrlAgent agent(make_aomrl1_config(a, set, schedule.episodes(), lam, dtilde));
        for (int k = 0; k < schedule.episodes(); ++k) {
            const int model = schedule.model_of(k);
            const int start = schedule.start_of(k);
            const MdpModel& env = set.models[model];
            const AomrlEpisodeResult ep = agent.run_episode(env, start, agent_rng);
            const bool correct = books.record_and_check(ep.cluster_id, model, set.size());

            const Cluster& cluster = agent.store().clusters[ep.cluster_id - 1];
            EmpiricalCounts eval_counts = cluster.regret_counts;
            if (!a.exclude_clustering_samples) eval_counts.merge(cluster.model_counts);
            const double eval_return =
                evaluate_learned(eval_counts, env, config.eval_horizon, start);
            const double vstar = oracle.value(set, model, ep.interaction_steps, start);
            push_row(k, model, ep.cluster_id, correct, ep.explored_ok, ep.realized_return,
                     eval_return, vstar - ep.realized_return, true);
        }
    } else if (a.kind == "aomrl2") {
        AomrlUnknownGammaAgent agent(make_aomrl2_config(a, set, schedule.episodes(), lam, dtilde));
        bool was_stage2 = false;
        for (int k = 0; k < schedule.episodes(); ++k) {
            const int model = schedule.model_of(k);
            const int start = schedule.start_of(k);
            const MdpModel& env = set.models[model];
            const AomrlEpisodeResult ep = agent.run_episode(env, start, agent_rng);
            if (ep.stage == 2 && !was_stage2) {
                was_stage2 = true;
                books.reset();  // stage 2 restarts the cluster store
            }
            const bool correct = books.record_and_check(ep.cluster_id, model, set.size());

            const Cluster& cluster = agent.last_episode_store().clusters[ep.cluster_id - 1];
            EmpiricalCounts eval_counts = cluster.regret_counts;
            if (!a.exclude_clustering_samples) eval_counts.merge(cluster.model_counts);
            const double eval_return =
                evaluate_learned(eval_counts, env, config.eval_horizon, start);
            const double vstar = oracle.value(set, model, ep.interaction_steps, start);
            push_row(k, model, ep.cluster_id, correct, ep.explored_ok, ep.realized_return,
                     eval_return, vstar - ep.realized_return, true);
        }
    } else if (a.kind == "ucbvi-one-episode") {
        const std::int64_t budget = a.h1_only ? h1 : *a.interaction_budget;
        const std::int64_t inner_episodes = std::max<std::int64_t>((budget + h1 - 1) / h1, 1);
        for (int k = 0; k < schedule.episodes(); ++k) {
            const int model = schedule.model_of(k);
            const int start = schedule.start_of(k);
            const MdpModel& env = set.models[model];
            UcbviAgent agent(set.num_states(), set.num_actions(), inner_episodes, h1,
                             a.failure_prob, a.bonus_scale, a.tight_value_cap);
            double realized = 0.0;
            std::int64_t remaining = budget;
            int s = start;
            while (remaining > 0) {
                const std::int64_t steps = std::min<std::int64_t>(h1, remaining);
                const UcbviEpisodeResult inner = agent.run_episode(env, s, agent_rng, steps);
                realized += inner.realized_return;
                s = inner.trace.back().next_state;
                remaining -= steps;
            }
            const double eval_return =
                evaluate_learned(agent.counts(), env, config.eval_horizon, start);
            const double vstar = oracle.value(set, model, budget, start);
            push_row(k, model, 0, true, true, realized, eval_return, vstar - realized, true);
        }
    } else if (a.kind == "random") {
        const std::int64_t budget = a.h1_only ? h1 : *a.interaction_budget;
        for (int k = 0; k < schedule.episodes(); ++k) {
            const int model = schedule.model_of(k);
            const int start = schedule.start_of(k);
            const MdpModel& env = set.models[model];
            double realized = 0.0;
            int s = start;
            for (std::int64_t i = 0; i < budget; ++i) {
                const int act = static_cast<int>(agent_rng.next_below(set.num_actions()));
                realized += env.reward.at(s, act);
                s = sample_transition(env, s, act, agent_rng);
            }
            const double eval_return = evaluate_uniform_random(env, config.eval_horizon, start);
            const double vstar = oracle.value(set, model, budget, start);
            push_row(k, model, 0, true, true, realized, eval_return, vstar - realized, true);
        }
    } else if (a.kind == "optimal") {
        const std::int64_t budget = a.h1_only ? h1 : *a.interaction_budget;
        std::map<int, NonstationaryPolicy> plans;
        std::map<int, double> exact_regret;  // identically zero, computed literally once
        std::map<int, double> eval_returns;
        for (int k = 0; k < schedule.episodes(); ++k) {
            const int model = schedule.model_of(k);
            const int start = schedule.start_of(k);
            const MdpModel& env = set.models[model];
            if (!plans.count(model)) {
                auto [values, policy] = optimal_value_and_policy(env, static_cast<int>(budget));
                exact_regret[model] = values.at(0, start) - evaluate_policy(env, policy, start);
                plans.emplace(model, std::move(policy));
                const auto [eval_values, eval_policy] =
                    optimal_value_and_policy(env, config.eval_horizon);
                eval_returns[model] = evaluate_policy(env, eval_policy, start);
            }
            const NonstationaryPolicy& policy = plans.at(model);
            double realized = 0.0;
            int s = start;
            for (std::int64_t i = 0; i < budget; ++i) {
                const int act = policy.at(static_cast<int>(i), s);
                realized += env.reward.at(s, act);
                s = sample_transition(env, s, act, agent_rng);
            }
            push_row(k, model, 0, true, true, realized, eval_returns.at(model),
                     exact_regret.at(model), false);
        }
    } else {
        throw ConfigError("unknown agent kind '" + a.kind + "'");
    }
    return result;
}

}  // namespace

std::vector<SeedResult> run_experiment(const ExperimentConfig& config) {
    config.validate();
    const ModelSet set = build_environment(config.env);
    if (config.agent.kind == "aomrl1" || config.agent.kind == "aomrl2") {
        if (!config.agent.lam_override && !set.lam)
            throw ConfigError("config: lambda unknown for this environment; set agent.lambda");
        if (!config.agent.dtilde_override && !set.dtilde)
            throw ConfigError("config: dtilde unknown for this environment; set agent.dtilde");
    }

    OracleValues oracle;
    std::vector<std::future<SeedResult>> futures;
    std::vector<SeedResult> results(config.seeds.size());
    for (std::size_t i = 0; i < config.seeds.size(); ++i) {
        futures.push_back(std::async(std::launch::async, [&, i] {
            return run_seed(config, set, config.seeds[i], oracle);
        }));
    }
    for (std::size_t i = 0; i < config.seeds.size(); ++i) results[i] = futures[i].get();
    return results;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {
constexpr const char* kCsvHeader =
    "run_id,seed,episode,model_true,cluster_id,cluster_correct,explored_ok,"
    "realized_return,eval_return,regret,regret_is_proxy,aper";
}

void write_metrics_csv(const std::string& run_id, const SeedResult& result,
                       const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_metrics_csv: cannot open " + path);
    out << kCsvHeader << '\n';
    for (const auto& r : result.rows) {
        out << run_id << ',' << result.seed << ',' << r.episode << ',' << r.model_true << ','
            << r.cluster_id << ',' << (r.cluster_correct ? 1 : 0) << ','
            << (r.explored_ok ? 1 : 0) << ',' << format_double(r.realized_return) << ','
            << format_double(r.eval_return) << ',' << format_double(r.regret) << ','
            << (r.regret_is_proxy ? 1 : 0) << ',' << format_double(r.aper) << '\n';
    }
}

std::vector<MetricsRow> parse_metrics_csv(const std::string& path, std::string* run_id,
                                          std::uint64_t* seed) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("parse_metrics_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::runtime_error("parse_metrics_csv: bad header in " + path);
    std::vector<MetricsRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 12)
            throw std::runtime_error("parse_metrics_csv: malformed row in " + path);
        if (run_id) *run_id = fields[0];
        if (seed) *seed = std::stoull(fields[1]);
        MetricsRow r;
        r.episode = std::stoi(fields[2]);
        r.model_true = std::stoi(fields[3]);
        r.cluster_id = std::stoi(fields[4]);
        r.cluster_correct = fields[5] == "1";
        r.explored_ok = fields[6] == "1";
        r.realized_return = std::stod(fields[7]);
        r.eval_return = std::stod(fields[8]);
        r.regret = std::stod(fields[9]);
        r.regret_is_proxy = fields[10] == "1";
        r.aper = std::stod(fields[11]);
        rows.push_back(r);
    }
    return rows;
}

std::vector<double> mean_aper(const std::vector<SeedResult>& results) {
    if (results.empty()) return {};
    const std::size_t episodes = results.front().rows.size();
    std::vector<double> mean(episodes, 0.0);
    for (const auto& seed : results)
        for (std::size_t k = 0; k < episodes; ++k) mean[k] += seed.rows[k].aper;
    for (auto& v : mean) v /= static_cast<double>(results.size());
    return mean;
}

std::vector<std::string> emit_outputs(const ExperimentConfig& config,
                                      const std::vector<SeedResult>& results) {
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    std::vector<std::string> written;

    for (const auto& result : results) {
        const std::string path =
            (fs::path(config.output_dir) /
             (config.run_id + "_seed" + std::to_string(result.seed) + ".csv"))
                .string();
        write_metrics_csv(config.run_id, result, path);
        written.push_back(path);
    }

    const std::size_t episodes = results.empty() ? 0 : results.front().rows.size();
    const std::string agg_path =
        (fs::path(config.output_dir) / (config.run_id + "_aggregate.csv")).string();
    {
        std::ofstream out(agg_path, std::ios::binary);
        if (!out) throw std::runtime_error("emit_outputs: cannot open " + agg_path);
        out << "episode,n_seeds,aper_mean,aper_std,eval_return_mean,eval_return_std,"
               "regret_mean,regret_std,cluster_accuracy\n";
        for (std::size_t k = 0; k < episodes; ++k) {
            const double n = static_cast<double>(results.size());
            double aper_m = 0, eval_m = 0, regret_m = 0, acc = 0;
            for (const auto& r : results) {
                aper_m += r.rows[k].aper;
                eval_m += r.rows[k].eval_return;
                regret_m += r.rows[k].regret;
                acc += r.rows[k].cluster_correct ? 1.0 : 0.0;
            }
            aper_m /= n;
            eval_m /= n;
            regret_m /= n;
            acc /= n;
            double aper_v = 0, eval_v = 0, regret_v = 0;
            for (const auto& r : results) {
                aper_v += (r.rows[k].aper - aper_m) * (r.rows[k].aper - aper_m);
                eval_v += (r.rows[k].eval_return - eval_m) * (r.rows[k].eval_return - eval_m);
                regret_v += (r.rows[k].regret - regret_m) * (r.rows[k].regret - regret_m);
            }
            aper_v = std::sqrt(aper_v / n);
            eval_v = std::sqrt(eval_v / n);
            regret_v = std::sqrt(regret_v / n);
            out << (k + 1) << ',' << results.size() << ',' << format_double(aper_m) << ','
                << format_double(aper_v) << ',' << format_double(eval_m) << ','
                << format_double(eval_v) << ',' << format_double(regret_m) << ','
                << format_double(regret_v) << ',' << format_double(acc) << '\n';
        }
    }
    written.push_back(agg_path);

    const std::string plot_path =
        (fs::path(config.output_dir) / (config.run_id + "_plotdata.csv")).string();
    {
        std::ofstream out(plot_path, std::ios::binary);
        if (!out) throw std::runtime_error("emit_outputs: cannot open " + plot_path);
        out << "episode," << config.run_id << "_aper_mean\n";
        const auto mean = mean_aper(results);
        for (std::size_t k = 0; k < mean.size(); ++k)
            out << (k + 1) << ',' << format_double(mean[k]) << '\n';
    }
    written.push_back(plot_path);
    return written;
}

}  // namespace mtrl
