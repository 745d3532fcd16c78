#pragma once

#include <cstdint>
#include <vector>

#include "uavsim/energy.hpp"
#include "uavsim/mobility.hpp"
#include "uavsim/radio.hpp"
#include "uavsim/rng.hpp"
#include "uavsim/types.hpp"

namespace uavsim {

struct WorldConfig {
    Rect area{0.0, 1000.0, 0.0, 1000.0};
    double h_min = 50.0;
    double h_max = 200.0;
    double step_x = 20.0;  // per-axis action step distances, in [0, 20] m
    double step_y = 20.0;
    double step_z = 20.0;
    std::size_t n_uavs = 4;
    std::size_t n_static_users = 200;
    std::size_t n_mobile_users = 200;
    double neighbourhood_radius = 300.0;  // broadcast range for the cooperative factor
    double delta_t = 1.0;
    std::size_t max_steps = 1500;
    double energy_budget = 1278720.0;  // J; 16 Ah pack at 22.2 V
    ChannelParams channel;
    PowerParams power;
    GmmParams gmm;

    std::size_t total_users() const { return n_static_users + n_mobile_users; }
    void validate() const;  // throws std::invalid_argument
};

/// Everything the simulation knows at one instant. Mutated only by
/// World::step; cheap to copy for before/after comparisons.
struct WorldState {
    std::vector<Vec3> uav_positions;
    EnergyLedger ledger;
    std::vector<UserState> users;
    AssociationMap assoc;
    std::vector<int> scores;             // connectivity score per UAV, current step
    std::vector<int> prev_scores;        // previous step
    std::vector<int> neigh_scores;       // summed scores within broadcast range, incl. self
    std::vector<int> prev_neigh_scores;
    std::vector<double> step_energy;     // J consumed this step per UAV; 0 for dead UAVs
    std::size_t step_count = 0;
    bool done = false;

    bool alive(std::size_t uav) const { return ledger.alive(uav); }
};

struct StepMetrics {
    double energy_efficiency = 0.0;   // bit/J for this step
    std::size_t outage = 0;           // users with no serving UAV
    double step_energy_total = 0.0;   // J summed over the fleet
    std::vector<int> scores;          // per-UAV connected-user counts
};

struct StepResult {
    std::vector<Observation> observations;
    std::vector<double> rewards;  // 0 for UAVs that were dead when the step began
    bool done = false;
    StepMetrics metrics;
};

/// Reward pieces as plain numbers: connectivity delta, energy trend and the
/// neighbourhood incentive.
double reward_from_components(int score_now, int score_prev, int neigh_now, int neigh_prev,
                              double energy_now, double energy_prev);

/// Reward of one agent across two consecutive world states.
double compute_reward(std::size_t uav, const WorldState& before, const WorldState& after,
                      double neighbourhood_radius);

/// Summed connectivity score of all UAVs within `radius` of UAV j, including j.
int neighbourhood_score(const WorldState& s, std::size_t uav, double radius);

/// The shared multi-agent environment. One instance is single-writer; run
/// independent instances for independent trials.
class World {
public:
    World(const WorldConfig& cfg, std::uint64_t seed);

    void reset(std::uint64_t seed);

    /// Advances one step: UAV moves, user mobility, reassociation, energy
    /// accounting, rewards, metrics. Throws std::logic_error once done.
    StepResult step(const std::vector<Action>& joint_actions);

    /// Where the UAV would end up and how fast it would fly; out-of-bounds
    /// moves degrade to hovering in place.
    struct MoveResult {
        Vec3 position;
        double speed = 0.0;
    };
    MoveResult apply_action(std::size_t uav, Action a) const;

    Observation observe(std::size_t uav) const;
    std::vector<Observation> observe_all() const;

    const WorldState& state() const { return state_; }
    const WorldConfig& config() const { return cfg_; }

private:
    void associate_and_score();

    WorldConfig cfg_;
    WorldState state_;
    std::vector<Rng> user_rngs_;  // one stream per user
    Rng world_rng_;
};

}  // namespace uavsim
