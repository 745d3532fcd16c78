#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "uavsim/agent.hpp"
#include "uavsim/world.hpp"

namespace uavsim {

/// Full experiment description: world, learner and run control. Defaults
/// reproduce the full-scale setup; configs/ ships smaller presets.
struct ExperimentConfig {
    WorldConfig world;
    AgentConfig agent;           // epsilon_decay_steps == 0 means "auto"
    std::size_t episodes = 250;
    std::size_t trials = 2000;
    std::uint64_t seed = 1;
    std::string policy = "mad-ddqn";  // or "random"
    std::size_t checkpoint_every = 50;
    // Training episodes cycle through this many fixed scenario seeds, which
    // makes learning curves comparable across same-length windows;
    // evaluation always draws held-out scenarios. 0 = a fresh scenario
    // every episode.
    std::size_t training_layouts = 10;
    std::filesystem::path out_dir = "out";

    /// Auto rule: decay over half of the planned training steps.
    std::size_t effective_epsilon_decay_steps() const;
    /// Agent config with the epsilon horizon resolved.
    AgentConfig resolved_agent_config() const;

    void validate() const;  // throws std::invalid_argument
};

/// Parses a `key = value` config file with [world], [channel], [power],
/// [gmm], [agent] and [run] sections, then applies environment overrides of
/// the form UAVSIM_<SECTION>_<KEY>. Unknown sections or keys are errors.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Defaults plus environment overrides only.
ExperimentConfig default_experiment_config();

}  // namespace uavsim
