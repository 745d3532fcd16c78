#include "uavsim/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uavsim {

void WorldConfig::validate() const {
    if (!(area.x_max > area.x_min) || !(area.y_max > area.y_min)) {
        throw std::invalid_argument("WorldConfig: area bounds must be ordered and non-empty");
    }
    if (!(h_max > h_min) || h_min < 0.0) {
        throw std::invalid_argument("WorldConfig: altitude bounds must satisfy 0 <= h_min < h_max");
    }
    for (double s : {step_x, step_y, step_z}) {
        if (s < 0.0 || s > 20.0) {
            throw std::invalid_argument("WorldConfig: step distances must lie in [0, 20] m");
        }
    }
    if (n_uavs == 0) throw std::invalid_argument("WorldConfig: need at least one UAV");
    if (total_users() == 0) throw std::invalid_argument("WorldConfig: need at least one user");
    if (!(neighbourhood_radius >= 0.0)) {
        throw std::invalid_argument("WorldConfig: neighbourhood radius must be non-negative");
    }
    if (!(delta_t > 0.0)) throw std::invalid_argument("WorldConfig: delta_t must be positive");
    if (max_steps == 0) throw std::invalid_argument("WorldConfig: max_steps must be positive");
    if (!(energy_budget > 0.0)) {
        throw std::invalid_argument("WorldConfig: energy budget must be positive");
    }
    channel.validate();
    power.validate();
    gmm.validate();
}

double reward_from_components(int score_now, int score_prev, int neigh_now, int neigh_prev,
                              double energy_now, double energy_prev) {
    const double coop = neigh_now > neigh_prev ? 1.0 : -1.0;
    const double denom = energy_now + energy_prev;
    const double energy_trend = denom > 0.0 ? (energy_prev - energy_now) / denom : 0.0;
    double delta = 0.0;
    if (score_now > score_prev) {
        delta = 1.0;
    } else if (score_now < score_prev) {
        delta = -1.0;
    }
    return coop + energy_trend + delta;
}

int neighbourhood_score(const WorldState& s, std::size_t uav, double radius) {
    int total = 0;
    for (std::size_t k = 0; k < s.uav_positions.size(); ++k) {
        if (distance(s.uav_positions[uav], s.uav_positions[k]) <= radius) {
            total += s.scores[k];
        }
    }
    return total;
}

double compute_reward(std::size_t uav, const WorldState& before, const WorldState& after,
                      double neighbourhood_radius) {
    return reward_from_components(after.scores[uav], before.scores[uav],
                                  neighbourhood_score(after, uav, neighbourhood_radius),
                                  neighbourhood_score(before, uav, neighbourhood_radius),
                                  after.step_energy[uav], before.step_energy[uav]);
}

World::World(const WorldConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
    cfg_.validate();
    reset(seed);
}

void World::reset(std::uint64_t seed) {
    world_rng_ = Rng(derive_seed(seed, 0x57524C44));  // world placement stream

    const std::size_t n = cfg_.n_uavs;
    state_ = WorldState{};
    state_.ledger = EnergyLedger(n, cfg_.energy_budget, cfg_.delta_t);

    std::uniform_real_distribution<double> ux(cfg_.area.x_min, cfg_.area.x_max);
    std::uniform_real_distribution<double> uy(cfg_.area.y_min, cfg_.area.y_max);
    std::uniform_real_distribution<double> uh(cfg_.h_min, cfg_.h_max);
    state_.uav_positions.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        state_.uav_positions.push_back({ux(world_rng_), uy(world_rng_), uh(world_rng_)});
    }

    std::uniform_real_distribution<double> uspeed(0.0, cfg_.gmm.max_speed);
    std::uniform_real_distribution<double> uheading(0.0, 2.0 * std::numbers::pi);
    const std::size_t n_users = cfg_.total_users();
    state_.users.reserve(n_users);
    user_rngs_.clear();
    user_rngs_.reserve(n_users);
    for (std::size_t i = 0; i < n_users; ++i) {
        UserState u;
        u.x = ux(world_rng_);
        u.y = uy(world_rng_);
        u.mobile = i >= cfg_.n_static_users;
        if (u.mobile) {
            u.speed = uspeed(world_rng_);
            u.heading = uheading(world_rng_);
            u.mean_heading = u.heading;
        }
        state_.users.push_back(u);
        user_rngs_.emplace_back(derive_seed(seed, 0x55534552ULL + i));
    }

    associate_and_score();
    state_.prev_scores = state_.scores;
    state_.prev_neigh_scores = state_.neigh_scores;
    // Seed the per-step energy with hover energy so the first-step energy
    // trend compares against a hovering fleet instead of dividing by zero.
    state_.step_energy.assign(n, hover_power(cfg_.power) * cfg_.delta_t);
}

void World::associate_and_score() {
    const std::size_t n = cfg_.n_uavs;
    std::vector<Vec3> user_positions;
    user_positions.reserve(state_.users.size());
    for (const UserState& u : state_.users) user_positions.push_back(u.position());

    std::vector<bool> active(n);
    for (std::size_t j = 0; j < n; ++j) active[j] = state_.ledger.alive(j);

    state_.assoc = associate(user_positions, state_.uav_positions, cfg_.channel, active);
    state_.scores = connectivity_scores(state_.assoc, n);

    state_.neigh_scores.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        state_.neigh_scores[j] = neighbourhood_score(state_, j, cfg_.neighbourhood_radius);
    }
}

World::MoveResult World::apply_action(std::size_t uav, Action a) const {
    const Vec3& pos = state_.uav_positions.at(uav);
    if (!state_.alive(uav)) {
        return {pos, 0.0};  // dead UAVs hover at their final position
    }
    const Vec3 delta = action_displacement(a, cfg_.step_x, cfg_.step_y, cfg_.step_z);
    const Vec3 target = pos + delta;
    const bool in_bounds = cfg_.area.contains(target.x, target.y) && target.z >= cfg_.h_min &&
                           target.z <= cfg_.h_max;
    if (!in_bounds) {
        return {pos, 0.0};  // out-of-bounds moves degrade to hover
    }
    return {target, norm(delta) / cfg_.delta_t};
}

Observation World::observe(std::size_t uav) const {
    const Vec3& pos = state_.uav_positions.at(uav);
    const double remaining =
        1.0 - state_.ledger.cumulative(uav) / cfg_.energy_budget;
    return Observation{
        (pos.x - cfg_.area.x_min) / cfg_.area.width(),
        (pos.y - cfg_.area.y_min) / cfg_.area.height(),
        (pos.z - cfg_.h_min) / (cfg_.h_max - cfg_.h_min),
        static_cast<double>(state_.scores[uav]) / static_cast<double>(cfg_.total_users()),
        std::clamp(remaining, 0.0, 1.0),
    };
}

std::vector<Observation> World::observe_all() const {
    std::vector<Observation> out;
    out.reserve(cfg_.n_uavs);
    for (std::size_t j = 0; j < cfg_.n_uavs; ++j) out.push_back(observe(j));
    return out;
}

StepResult World::step(const std::vector<Action>& joint_actions) {
    if (state_.done) {
        throw std::logic_error("World::step: episode is done");
    }
    if (joint_actions.size() != cfg_.n_uavs) {
        throw std::invalid_argument("World::step: one action per UAV required");
    }

    const WorldState before = state_;

    // 1. UAV kinematics.
    std::vector<double> speeds(cfg_.n_uavs, 0.0);
    std::vector<bool> acted(cfg_.n_uavs, false);
    for (std::size_t j = 0; j < cfg_.n_uavs; ++j) {
        acted[j] = state_.alive(j);
        const MoveResult m = apply_action(j, joint_actions[j]);
        state_.uav_positions[j] = m.position;
        speeds[j] = m.speed;
    }

    // 2. User mobility.
    for (std::size_t i = 0; i < state_.users.size(); ++i) {
        if (state_.users[i].mobile) {
            state_.users[i] = gmm_step(state_.users[i], cfg_.gmm, user_rngs_[i], cfg_.area);
        }
    }

    // 3. Association and connectivity scores.
    associate_and_score();

    // 4. Propulsion energy for every UAV that was alive when the step began.
    state_.ledger.begin_step();
    for (std::size_t j = 0; j < cfg_.n_uavs; ++j) {
        if (acted[j]) {
            state_.ledger.accumulate(j, propulsion_power(speeds[j], cfg_.power));
        }
    }
    state_.step_energy.assign(cfg_.n_uavs, 0.0);
    for (std::size_t j = 0; j < cfg_.n_uavs; ++j) {
        if (acted[j]) state_.step_energy[j] = state_.ledger.last_step(j);
    }

    // 5. Rewards for the acting agents.
    StepResult result;
    result.rewards.assign(cfg_.n_uavs, 0.0);
    for (std::size_t j = 0; j < cfg_.n_uavs; ++j) {
        if (acted[j]) {
            result.rewards[j] = compute_reward(j, before, state_, cfg_.neighbourhood_radius);
        }
    }
    state_.prev_scores = before.scores;
    state_.prev_neigh_scores = before.neigh_scores;

    // 6. Metrics and episode bookkeeping.
    result.metrics.outage = outage_count(state_.assoc);
    result.metrics.scores = state_.scores;
    double total_step_energy = 0.0;
    for (double e : state_.step_energy) total_step_energy += e;
    result.metrics.step_energy_total = total_step_energy;
    result.metrics.energy_efficiency =
        energy_efficiency(system_throughput(state_.assoc), state_.step_energy);

    ++state_.step_count;
    state_.done = state_.step_count >= cfg_.max_steps || state_.ledger.all_dead();
    result.done = state_.done;
    result.observations = observe_all();
    return result;
}

}  // namespace uavsim
