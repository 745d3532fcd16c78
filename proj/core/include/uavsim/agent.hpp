#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "uavsim/neural.hpp"
#include "uavsim/types.hpp"

namespace uavsim {

struct Transition {
    Observation state{};
    int action = 0;  // in [0, 6]
    double reward = 0.0;
    Observation next_state{};
    bool terminal = false;
};

/// Bounded FIFO transition store with uniform sampling.
class ReplayMemory {
public:
    explicit ReplayMemory(std::size_t capacity = 10000);

    void push(const Transition& t);
    std::vector<Transition> sample(std::size_t batch, Rng& rng) const;

    std::size_t size() const { return size_; }
    std::size_t capacity() const { return capacity_; }
    /// Stored transitions in insertion order, oldest first.
    const Transition& at(std::size_t i) const;

private:
    std::vector<Transition> buf_;
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::size_t size_ = 0;
};

struct AgentConfig {
    double discount = 0.95;
    double learning_rate = 1e-4;
    std::size_t batch_size = 1024;
    std::size_t memory_capacity = 10000;
    std::size_t target_sync_period = 100;
    double epsilon_start = 1.0;
    double epsilon_end = 0.01;
    std::size_t epsilon_decay_steps = 1;
    double rms_decay = 0.99;
    double rms_epsilon = 1e-8;

    void validate() const;  // throws std::invalid_argument
};

/// Linear schedule from epsilon_start at step 0 down to epsilon_end at
/// epsilon_decay_steps, constant afterwards.
double epsilon_at(std::size_t step, const AgentConfig& cfg);

/// Epsilon-greedy over the 7 Q-values; greedy ties break to the lowest index.
int select_action(const QNetwork& net, const Observation& obs, double epsilon, Rng& rng);

/// Double-Q targets: the online network picks the next action, the target
/// network values it. Terminal transitions use the bare reward.
Eigen::VectorXd ddqn_targets(const QNetwork& main, const QNetwork& target,
                             const std::vector<Transition>& batch, double discount);

/// Independent double-DQN learner owning its networks, optimiser state,
/// replay memory and RNG stream.
class Agent {
public:
    Agent(const AgentConfig& cfg, std::uint64_t seed);

    /// Epsilon-greedy action for one environment step; advances the
    /// exploration schedule.
    int act(const Observation& obs);
    /// Pure exploitation (epsilon = 0); does not advance the schedule.
    int act_greedy(const Observation& obs) const;

    void remember(const Transition& t);

    /// One learning step: no-op until the memory holds a full batch,
    /// otherwise samples, trains and periodically syncs the target network.
    /// Returns the loss when a step ran.
    std::optional<double> update();

    const AgentConfig& config() const { return cfg_; }
    const QNetwork& network() const { return net_; }
    const QNetwork& target_network() const { return target_; }
    const ReplayMemory& memory() const { return memory_; }
    std::size_t env_steps() const { return env_steps_; }
    std::size_t update_count() const { return updates_; }
    double current_epsilon() const { return epsilon_at(env_steps_, cfg_); }

    // Checkpoint layout, little-endian:
    //   "UQCK" | u32 version | config echo | u64 env_steps | network blob.
    void save_checkpoint(const std::filesystem::path& path) const;
    static Agent load_checkpoint(const std::filesystem::path& path);
    /// Network-only view of a checkpoint, with full header validation.
    static QNetwork load_checkpoint_network(const std::filesystem::path& path);
    static constexpr std::uint32_t kCheckpointFormatVersion = 1;

private:
    Agent() = default;

    AgentConfig cfg_;
    QNetwork net_;
    QNetwork target_;
    RmsPropState opt_;
    ReplayMemory memory_{10000};
    Rng rng_;
    std::size_t env_steps_ = 0;
    std::size_t updates_ = 0;
};

}  // namespace uavsim
