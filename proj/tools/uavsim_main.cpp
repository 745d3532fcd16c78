// Command-line front end: train a fleet of DDQN-controlled UAV base
// stations, evaluate trained or random policies over Monte-Carlo trials,
// and inspect saved checkpoints.

#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "uavsim/config.hpp"
#include "uavsim/harness.hpp"

namespace {

uavsim::ExperimentConfig load_config_or_default(const std::string& config_path) {
    if (config_path.empty()) return uavsim::default_experiment_config();
    return uavsim::load_experiment_config(config_path);
}

int cmd_train(const std::string& config_path, std::optional<std::uint64_t> seed,
              const std::string& out_dir) {
    uavsim::ExperimentConfig cfg = load_config_or_default(config_path);
    if (seed) cfg.seed = *seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;

    const uavsim::TrainingResult result = uavsim::run_training(cfg);
    std::cout << "trained " << cfg.episodes << " episode(s), "
              << cfg.world.n_uavs << " agent(s)\n"
              << "log:         " << result.log_path.string() << '\n'
              << "checkpoints: " << result.checkpoint_dir.string() << '\n';
    if (!result.episodes.empty()) {
        const auto& last = result.episodes.back();
        std::cout << "final episode EE sum: " << uavsim::format_csv_number(last.ee_sum)
                  << " bit/J, mean reward " << uavsim::format_csv_number(last.mean_reward) << '\n';
    }
    return 0;
}

int cmd_eval(const std::string& config_path, const std::string& checkpoint_dir,
             const std::string& policy, std::optional<std::uint64_t> trials,
             std::optional<std::uint64_t> seed, const std::string& out_dir,
             const std::string& reference_summary) {
    uavsim::ExperimentConfig cfg = load_config_or_default(config_path);
    if (!policy.empty()) cfg.policy = policy;
    if (trials) cfg.trials = *trials;
    if (seed) cfg.seed = *seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;

    std::optional<double> reference;
    if (!reference_summary.empty()) {
        reference = uavsim::read_summary_mean_ee(reference_summary);
    }

    const uavsim::RunSummary summary = uavsim::run_evaluation(cfg, checkpoint_dir, reference);
    std::cout << "policy:            " << summary.policy << '\n'
              << "trials:            " << summary.trials << '\n'
              << "mean EE (bit/J):   " << uavsim::format_csv_number(summary.mean_ee) << '\n'
              << "std EE:            " << uavsim::format_csv_number(summary.std_ee) << '\n'
              << "mean outage:       " << uavsim::format_csv_number(summary.mean_outage) << '\n'
              << "mean total energy: " << uavsim::format_csv_number(summary.mean_total_energy)
              << " J\n"
              << "normalized EE:     " << uavsim::format_csv_number(summary.normalized_ee) << '\n';
    return 0;
}

int cmd_inspect(const std::string& checkpoint_path) {
    const uavsim::Agent agent = uavsim::Agent::load_checkpoint(checkpoint_path);
    const uavsim::QNetwork& net = agent.network();
    const uavsim::AgentConfig& cfg = agent.config();

    std::cout << "checkpoint:        " << checkpoint_path << '\n'
              << "format version:    " << uavsim::Agent::kCheckpointFormatVersion << '\n'
              << "layers:            ";
    for (std::size_t i = 0; i < net.layer_sizes.size(); ++i) {
        if (i > 0) std::cout << " -> ";
        std::cout << net.layer_sizes[i];
    }
    std::cout << '\n'
              << "parameters:        " << net.parameter_count() << '\n'
              << "training steps:    " << agent.env_steps() << '\n'
              << "discount:          " << cfg.discount << '\n'
              << "learning rate:     " << cfg.learning_rate << '\n'
              << "batch size:        " << cfg.batch_size << '\n'
              << "memory capacity:   " << cfg.memory_capacity << '\n'
              << "target sync:       every " << cfg.target_sync_period << " updates\n"
              << "epsilon:           " << cfg.epsilon_start << " -> " << cfg.epsilon_end
              << " over " << cfg.epsilon_decay_steps << " steps\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UAV base-station coverage simulator with decentralised DDQN control"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string checkpoint_dir;
    std::string checkpoint_path;
    std::string policy;
    std::string reference_summary;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;

    CLI::App* train = app.add_subcommand("train", "Train one DDQN agent per UAV");
    train->add_option("--config", config_path, "Experiment config file");
    train->add_option("--seed", seed, "Master seed (overrides config)");
    train->add_option("--out", out_dir, "Output directory (overrides config)");

    CLI::App* eval = app.add_subcommand("eval", "Evaluate a policy over Monte-Carlo trials");
    eval->add_option("--config", config_path, "Experiment config file");
    eval->add_option("--checkpoint-dir", checkpoint_dir,
                     "Directory with agent_<j>.ckpt files (mad-ddqn policy)");
    eval->add_option("--policy", policy, "Policy: mad-ddqn or random")
        ->check(CLI::IsMember({"mad-ddqn", "random"}));
    eval->add_option("--trials", trials, "Monte-Carlo trial count (overrides config)");
    eval->add_option("--seed", seed, "Master seed (overrides config)");
    eval->add_option("--out", out_dir, "Output directory (overrides config)");
    eval->add_option("--reference", reference_summary,
                     "eval_summary.csv whose mean EE normalizes this run");

    CLI::App* inspect = app.add_subcommand("inspect", "Describe a saved agent checkpoint");
    inspect->add_option("--checkpoint", checkpoint_path, "Checkpoint file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            return cmd_train(config_path, seed, out_dir);
        }
        if (eval->parsed()) {
            return cmd_eval(config_path, checkpoint_dir, policy, trials, seed, out_dir,
                            reference_summary);
        }
        return cmd_inspect(checkpoint_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
