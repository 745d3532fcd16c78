#pragma once

#include "uavsim/rng.hpp"
#include "uavsim/types.hpp"

namespace uavsim {

/// Ground user. Mobile users follow a first-order Gauss-Markov recursion;
/// static users never move.
struct UserState {
    double x = 0.0;
    double y = 0.0;
    double speed = 0.0;          // m/s, in [0, max_speed]
    double heading = 0.0;        // rad, in [0, 2*pi)
    double mean_heading = 0.0;   // per-user drift direction of the recursion
    bool mobile = false;

    Vec3 position() const { return {x, y, 0.0}; }
};

struct GmmParams {
    double memory = 0.85;            // alpha_m in [0, 1]
    double mean_speed = 5.0;         // m/s
    double speed_noise_std = 1.5;    // m/s
    double heading_noise_std = 0.3;  // rad
    double step_duration = 1.0;      // s
    double max_speed = 15.0;         // m/s, hard clamp

    void validate() const;  // throws std::invalid_argument
};

/// Advances a mobile user one step. Speed and heading follow
///   v' = a*v + (1-a)*mean + sqrt(1-a^2)*N(0, std)
/// with the position advanced along the new heading and specular wall
/// reflection at the area border. Throws std::logic_error for static users.
UserState gmm_step(const UserState& u, const GmmParams& p, Rng& rng, const Rect& bounds);

}  // namespace uavsim
