#include "uavsim/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "uavsim/baseline.hpp"

namespace uavsim {

std::string format_csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("harness: cannot open " + path.string() + " for writing");
    }
    return out;
}

std::filesystem::path checkpoint_file(const std::filesystem::path& dir, std::size_t agent) {
    return dir / ("agent_" + std::to_string(agent) + ".ckpt");
}

void write_checkpoints(const std::vector<Agent>& agents, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (std::size_t j = 0; j < agents.size(); ++j) {
        agents[j].save_checkpoint(checkpoint_file(dir, j));
    }
}

void write_training_log(const std::filesystem::path& path,
                        const std::vector<EpisodeLogRow>& rows) {
    std::ofstream out = open_output(path);
    out << "episode,ee_sum,mean_reward,mean_outage,total_energy,epsilon\n";
    for (const EpisodeLogRow& r : rows) {
        out << r.episode << ',' << format_csv_number(r.ee_sum) << ','
            << format_csv_number(r.mean_reward) << ',' << format_csv_number(r.mean_outage) << ','
            << format_csv_number(r.total_energy) << ',' << format_csv_number(r.epsilon) << '\n';
    }
    if (!out) throw std::runtime_error("harness: write failed for " + path.string());
}

double fleet_cumulative_energy(const World& world) {
    double total = 0.0;
    for (std::size_t j = 0; j < world.config().n_uavs; ++j) {
        total += world.state().ledger.cumulative(j);
    }
    return total;
}

}  // namespace

TrainingResult run_training(const ExperimentConfig& cfg) {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);

    TrainingResult result;
    result.log_path = cfg.out_dir / "training_log.csv";
    result.checkpoint_dir = cfg.out_dir / "checkpoints";

    if (cfg.episodes == 0) {
        write_training_log(result.log_path, {});
        return result;
    }

    const AgentConfig agent_cfg = cfg.resolved_agent_config();
    std::vector<Agent> agents;
    agents.reserve(cfg.world.n_uavs);
    for (std::size_t j = 0; j < cfg.world.n_uavs; ++j) {
        agents.emplace_back(agent_cfg, derive_seed(cfg.seed, kAgentSeedSalt + j));
    }

    for (std::size_t e = 0; e < cfg.episodes; ++e) {
        const std::size_t scenario = cfg.training_layouts > 0 ? e % cfg.training_layouts : e;
        World world(cfg.world, derive_seed(cfg.seed, kEpisodeSeedSalt + scenario));
        std::vector<Observation> obs = world.observe_all();

        double ee_sum = 0.0;
        double reward_sum = 0.0;
        std::size_t reward_count = 0;
        double outage_sum = 0.0;
        std::size_t steps = 0;

        std::vector<Action> actions(cfg.world.n_uavs, Action::Hover);
        std::vector<bool> acted(cfg.world.n_uavs, false);
        while (!world.state().done) {
            for (std::size_t j = 0; j < cfg.world.n_uavs; ++j) {
                acted[j] = world.state().alive(j);
                actions[j] = acted[j] ? static_cast<Action>(agents[j].act(obs[j])) : Action::Hover;
            }
            const StepResult res = world.step(actions);

            for (std::size_t j = 0; j < cfg.world.n_uavs; ++j) {
                if (!acted[j]) continue;
                Transition t;
                t.state = obs[j];
                t.action = static_cast<int>(actions[j]);
                t.reward = res.rewards[j];
                t.next_state = res.observations[j];
                t.terminal = res.done || !world.state().alive(j);
                agents[j].remember(t);
                agents[j].update();
                reward_sum += res.rewards[j];
                ++reward_count;
            }

            obs = res.observations;
            ee_sum += res.metrics.energy_efficiency;
            outage_sum += static_cast<double>(res.metrics.outage);
            ++steps;
        }

        EpisodeLogRow row;
        row.episode = e;
        row.ee_sum = ee_sum;
        row.mean_reward = reward_count > 0 ? reward_sum / static_cast<double>(reward_count) : 0.0;
        row.mean_outage = steps > 0 ? outage_sum / static_cast<double>(steps) : 0.0;
        row.total_energy = fleet_cumulative_energy(world);
        row.epsilon = agents[0].current_epsilon();
        result.episodes.push_back(row);

        if ((e + 1) % cfg.checkpoint_every == 0) {
            write_checkpoints(agents, result.checkpoint_dir);
        }
    }

    write_checkpoints(agents, result.checkpoint_dir);
    write_training_log(result.log_path, result.episodes);
    return result;
}

RunSummary run_evaluation(const ExperimentConfig& cfg, const std::filesystem::path& checkpoint_dir,
                          std::optional<double> reference_mean_ee) {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);

    const bool learned = cfg.policy == "mad-ddqn";
    std::vector<QNetwork> nets;
    if (learned) {
        for (std::size_t j = 0; j < cfg.world.n_uavs; ++j) {
            const auto path = checkpoint_file(checkpoint_dir, j);
            if (!std::filesystem::exists(path)) {
                throw std::runtime_error("run_evaluation: missing checkpoint " + path.string());
            }
            nets.push_back(Agent::load_checkpoint_network(path));
        }
    }

    const std::filesystem::path steps_path = cfg.out_dir / "eval_steps.csv";
    std::ofstream steps_out = open_output(steps_path);
    steps_out << "trial,step,ee,outage,step_energy";
    for (std::size_t j = 0; j < cfg.world.n_uavs; ++j) steps_out << ",score_" << j;
    steps_out << '\n';

    RunSummary summary;
    summary.policy = cfg.policy;
    summary.trials = cfg.trials;

    Rng greedy_rng(0);  // epsilon = 0 never draws from it
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        World world(cfg.world, derive_seed(cfg.seed, kTrialSeedSalt + trial));
        RandomPolicy baseline(derive_seed(cfg.seed, kPolicySeedSalt + trial));

        TrialStats stats;
        stats.trial = trial;
        std::size_t steps = 0;
        double outage_sum = 0.0;

        std::vector<Observation> obs = world.observe_all();
        std::vector<Action> actions(cfg.world.n_uavs, Action::Hover);
        while (!world.state().done) {
            for (std::size_t j = 0; j < cfg.world.n_uavs; ++j) {
                if (!world.state().alive(j)) {
                    actions[j] = Action::Hover;
                } else if (learned) {
                    actions[j] = static_cast<Action>(select_action(nets[j], obs[j], 0.0, greedy_rng));
                } else {
                    actions[j] = static_cast<Action>(baseline.act());
                }
            }
            const StepResult res = world.step(actions);
            obs = res.observations;

            steps_out << trial << ',' << steps << ','
                      << format_csv_number(res.metrics.energy_efficiency) << ','
                      << res.metrics.outage << ','
                      << format_csv_number(res.metrics.step_energy_total);
            for (int s : res.metrics.scores) steps_out << ',' << s;
            steps_out << '\n';

            stats.ee_sum += res.metrics.energy_efficiency;
            outage_sum += static_cast<double>(res.metrics.outage);
            ++steps;
        }
        stats.mean_outage = steps > 0 ? outage_sum / static_cast<double>(steps) : 0.0;
        stats.total_energy = fleet_cumulative_energy(world);
        summary.per_trial.push_back(stats);
    }
    if (!steps_out) throw std::runtime_error("harness: write failed for " + steps_path.string());

    double ee_sum = 0.0;
    for (const TrialStats& t : summary.per_trial) {
        ee_sum += t.ee_sum;
        summary.mean_outage += t.mean_outage;
        summary.mean_total_energy += t.total_energy;
    }
    const double n = static_cast<double>(summary.per_trial.size());
    summary.mean_ee = ee_sum / n;
    summary.mean_outage /= n;
    summary.mean_total_energy /= n;
    if (summary.per_trial.size() > 1) {
        double sq = 0.0;
        for (const TrialStats& t : summary.per_trial) {
            const double d = t.ee_sum - summary.mean_ee;
            sq += d * d;
        }
        summary.std_ee = std::sqrt(sq / (n - 1.0));
    }
    const double reference = reference_mean_ee.value_or(summary.mean_ee);
    if (!(reference > 0.0)) {
        throw std::invalid_argument("run_evaluation: reference mean EE must be positive");
    }
    summary.normalized_ee = summary.mean_ee / reference;

    const std::filesystem::path summary_path = cfg.out_dir / "eval_summary.csv";
    std::ofstream sum_out = open_output(summary_path);
    sum_out << "policy,trials,mean_ee,std_ee,mean_outage,mean_total_energy,normalized_ee\n";
    sum_out << summary.policy << ',' << summary.trials << ',' << format_csv_number(summary.mean_ee)
            << ',' << format_csv_number(summary.std_ee) << ','
            << format_csv_number(summary.mean_outage) << ','
            << format_csv_number(summary.mean_total_energy) << ','
            << format_csv_number(summary.normalized_ee) << '\n';
    if (!sum_out) throw std::runtime_error("harness: write failed for " + summary_path.string());

    return summary;
}

double read_summary_mean_ee(const std::filesystem::path& summary_csv) {
    std::ifstream in(summary_csv);
    if (!in) throw std::runtime_error("harness: cannot open " + summary_csv.string());
    std::string header;
    std::string row;
    if (!std::getline(in, header) || !std::getline(in, row)) {
        throw std::runtime_error("harness: " + summary_csv.string() + " has no summary row");
    }
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        return cells;
    };
    const auto names = split(header);
    const auto cells = split(row);
    for (std::size_t i = 0; i < names.size() && i < cells.size(); ++i) {
        if (names[i] == "mean_ee") return std::stod(cells[i]);
    }
    throw std::runtime_error("harness: no mean_ee column in " + summary_csv.string());
}

}  // namespace uavsim
