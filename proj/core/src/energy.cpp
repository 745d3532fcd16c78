#include "uavsim/energy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace uavsim {

void PowerParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) {
            throw std::invalid_argument(std::string("PowerParams: ") + name +
                                        " must be strictly positive");
        }
    };
    positive(blade_profile_const, "blade_profile_const");
    positive(induced_const, "induced_const");
    positive(tip_speed, "tip_speed");
    positive(mean_hover_velocity, "mean_hover_velocity");
    positive(drag_ratio, "drag_ratio");
    positive(rotor_solidity, "rotor_solidity");
    positive(rotor_disc_area, "rotor_disc_area");
    positive(air_density, "air_density");
}

double propulsion_power(double speed, const PowerParams& pp) {
    if (speed < 0.0) {
        throw std::domain_error("propulsion_power: speed must be non-negative");
    }
    const double v2 = speed * speed;
    const double v0_2 = pp.mean_hover_velocity * pp.mean_hover_velocity;

    const double blade =
        pp.blade_profile_const * (1.0 + 3.0 * v2 / (pp.tip_speed * pp.tip_speed));
    const double induced =
        pp.induced_const *
        std::sqrt(std::sqrt(1.0 + v2 * v2 / (4.0 * v0_2 * v0_2)) + v2 / (2.0 * v0_2));
    const double parasite = 0.5 * pp.air_density * pp.drag_ratio * pp.rotor_solidity *
                            pp.rotor_disc_area * v2 * speed;
    return blade + induced + parasite;
}

double hover_power(const PowerParams& pp) {
    return pp.blade_profile_const + pp.induced_const;
}

EnergyLedger::EnergyLedger(std::size_t n_uavs, double budget_j, double step_duration_s)
    : cumulative_(n_uavs, 0.0),
      last_step_(n_uavs, 0.0),
      alive_(n_uavs, true),
      budget_(budget_j),
      step_duration_(step_duration_s) {
    if (!(budget_j > 0.0)) {
        throw std::invalid_argument("EnergyLedger: budget must be strictly positive");
    }
    if (!(step_duration_s > 0.0)) {
        throw std::invalid_argument("EnergyLedger: step duration must be strictly positive");
    }
}

void EnergyLedger::begin_step() {
    for (double& e : last_step_) e = 0.0;
}

void EnergyLedger::accumulate(std::size_t uav, double power_w) {
    if (!alive_.at(uav)) {
        throw std::logic_error("EnergyLedger: cannot accumulate energy for a dead UAV");
    }
    const double step_energy = power_w * step_duration_;
    last_step_[uav] = step_energy;
    cumulative_[uav] += step_energy;
    if (cumulative_[uav] > budget_) {
        alive_[uav] = false;
    }
}

bool EnergyLedger::all_dead() const {
    for (bool a : alive_) {
        if (a) return false;
    }
    return true;
}

double energy_efficiency(double total_rate_bps, const std::vector<double>& step_energies_j) {
    double total_energy = 0.0;
    for (double e : step_energies_j) total_energy += e;
    if (!(total_energy > 0.0)) {
        throw std::domain_error("energy_efficiency: summed step energy must be positive");
    }
    return total_rate_bps / total_energy;
}

}  // namespace uavsim
