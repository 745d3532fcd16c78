#pragma once

#include <cstddef>
#include <vector>

#include "uavsim/types.hpp"

namespace uavsim {

/// Downlink channel constants. Powers and ratios are linear, not dB.
struct ChannelParams {
    double attenuation = 1.0;         // beta, reference channel gain
    double pathloss_exponent = 2.0;   // alpha
    double tx_power_w = 0.1;          // P, 20 dBm
    double noise_power_w = 1e-16;     // sigma^2, -130 dBm
    double bandwidth_hz = 1e6;        // B_w
    double sinr_threshold = 3.1622776601683795;  // gamma_th, 5 dB

    void validate() const;  // throws std::invalid_argument
};

inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Result of associating every ground user with at most one serving UAV.
struct AssociationMap {
    std::vector<int> serving;   // serving UAV index per user, -1 if unassociated
    std::vector<double> sinr;   // best achieved SINR per user (linear)
    std::vector<double> rate;   // bit/s; 0 exactly when unassociated

    std::size_t user_count() const { return serving.size(); }
};

/// SINR at a user served by uavs[serving]; every other listed UAV interferes.
/// Throws std::domain_error on a zero user-UAV distance,
/// std::out_of_range on a bad serving index.
double sinr(const Vec3& user_pos, std::size_t serving, const std::vector<Vec3>& uav_positions,
            const ChannelParams& ch);

/// Strongest-SINR association with threshold gating. Ties go to the lowest
/// UAV index. `active` masks UAVs out of both the serving and interfering
/// sets; it must match `uavs` in length when given.
AssociationMap associate(const std::vector<Vec3>& users, const std::vector<Vec3>& uavs,
                         const ChannelParams& ch, const std::vector<bool>& active);
AssociationMap associate(const std::vector<Vec3>& users, const std::vector<Vec3>& uavs,
                         const ChannelParams& ch);

/// Sum of all per-user rates, bit/s.
double system_throughput(const AssociationMap& assoc);

/// Connected-user count per UAV.
std::vector<int> connectivity_scores(const AssociationMap& assoc, std::size_t n_uavs);

/// Number of users with no serving UAV.
std::size_t outage_count(const AssociationMap& assoc);

}  // namespace uavsim
