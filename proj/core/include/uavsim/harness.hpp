#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "uavsim/config.hpp"

namespace uavsim {

struct EpisodeLogRow {
    std::size_t episode = 0;
    double ee_sum = 0.0;        // summed per-step energy efficiency, bit/J
    double mean_reward = 0.0;   // over acting agents and steps
    double mean_outage = 0.0;   // per-step mean count of unserved users
    double total_energy = 0.0;  // fleet cumulative energy at episode end, J
    double epsilon = 0.0;       // exploration rate at episode end
};

struct TrainingResult {
    std::vector<EpisodeLogRow> episodes;
    std::filesystem::path log_path;
    std::filesystem::path checkpoint_dir;  // holds agent_<j>.ckpt
};

/// Trains one learner per UAV for cfg.episodes episodes, writing
/// training_log.csv and per-agent checkpoints under cfg.out_dir.
/// Fully determined by (config, seed).
TrainingResult run_training(const ExperimentConfig& cfg);

struct TrialStats {
    std::size_t trial = 0;
    double ee_sum = 0.0;
    double mean_outage = 0.0;
    double total_energy = 0.0;
};

struct RunSummary {
    std::string policy;
    std::size_t trials = 0;
    double mean_ee = 0.0;   // mean over trials of the per-trial EE sum
    double std_ee = 0.0;    // sample standard deviation
    double mean_outage = 0.0;
    double mean_total_energy = 0.0;
    double normalized_ee = 0.0;  // mean_ee over the reference mean
    std::vector<TrialStats> per_trial;
};

/// Runs cfg.trials independent evaluation episodes under either the greedy
/// learned policy (checkpoints required) or the random baseline, writing
/// eval_steps.csv and eval_summary.csv under cfg.out_dir. Trial seeds depend
/// only on (config seed, trial index), so both policies see identical worlds.
/// `reference_mean_ee` rescales the normalized EE; by default the run's own
/// mean is the reference.
RunSummary run_evaluation(const ExperimentConfig& cfg,
                          const std::filesystem::path& checkpoint_dir,
                          std::optional<double> reference_mean_ee = std::nullopt);

/// mean_ee column of a previously written eval_summary.csv.
double read_summary_mean_ee(const std::filesystem::path& summary_csv);

/// Round-trip-stable float formatting used for every CSV number.
std::string format_csv_number(double v);

// Seed derivation salts; shared so tests can reproduce any stream.
inline constexpr std::uint64_t kAgentSeedSalt = 0xA6E57000ULL;
inline constexpr std::uint64_t kEpisodeSeedSalt = 0xE5000000ULL;
inline constexpr std::uint64_t kTrialSeedSalt = 0x3741AA00ULL;
inline constexpr std::uint64_t kPolicySeedSalt = 0x6A5D0000ULL;

}  // namespace uavsim
