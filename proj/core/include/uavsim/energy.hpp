#pragma once

#include <cstddef>
#include <vector>

namespace uavsim {

/// Rotary-wing propulsion constants.
struct PowerParams {
    double blade_profile_const = 79.86;  // kappa_0, W
    double induced_const = 88.63;        // kappa_i, W
    double tip_speed = 120.0;            // U_tip, m/s
    double mean_hover_velocity = 4.03;   // v_0, m/s
    double drag_ratio = 0.6;             // nu
    double rotor_solidity = 0.05;        // s
    double rotor_disc_area = 0.503;      // A, m^2
    double air_density = 1.225;          // rho, kg/m^3

    void validate() const;  // throws std::invalid_argument
};

/// Propulsion power at horizontal speed V, watts.
/// Throws std::domain_error for negative V.
double propulsion_power(double speed, const PowerParams& pp);

/// Power while stationary: blade profile plus induced terms.
double hover_power(const PowerParams& pp);

/// Per-UAV energy bookkeeping against a shared budget. A UAV whose
/// cumulative energy exceeds the budget is marked dead and stays dead.
class EnergyLedger {
public:
    EnergyLedger() = default;
    EnergyLedger(std::size_t n_uavs, double budget_j, double step_duration_s);

    /// Clears the per-step energies at the start of a world step.
    void begin_step();

    /// Charges power * step_duration to a UAV. Throws std::logic_error when
    /// the UAV is already dead.
    void accumulate(std::size_t uav, double power_w);

    double cumulative(std::size_t uav) const { return cumulative_.at(uav); }
    double last_step(std::size_t uav) const { return last_step_.at(uav); }
    bool alive(std::size_t uav) const { return alive_.at(uav); }
    bool all_dead() const;

    std::size_t size() const { return cumulative_.size(); }
    double budget() const { return budget_; }
    double step_duration() const { return step_duration_; }

private:
    std::vector<double> cumulative_;
    std::vector<double> last_step_;
    std::vector<bool> alive_;
    double budget_ = 0.0;
    double step_duration_ = 1.0;
};

/// System energy efficiency: total rate over summed per-step energies, bit/J.
/// Throws std::domain_error when the summed energy is not positive.
double energy_efficiency(double total_rate_bps, const std::vector<double>& step_energies_j);

}  // namespace uavsim
