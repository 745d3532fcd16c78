#include "uavsim/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uavsim {

void GmmParams::validate() const {
    if (memory < 0.0 || memory > 1.0) {
        throw std::invalid_argument("GmmParams: memory must lie in [0, 1]");
    }
    if (speed_noise_std < 0.0 || heading_noise_std < 0.0) {
        throw std::invalid_argument("GmmParams: noise stds must be non-negative");
    }
    if (!(mean_speed >= 0.0) || !(max_speed > 0.0) || !(step_duration > 0.0)) {
        throw std::invalid_argument("GmmParams: speeds and step duration must be positive");
    }
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double gaussian(Rng& rng, double stddev) {
    if (stddev <= 0.0) return 0.0;
    return std::normal_distribution<double>(0.0, stddev)(rng);
}

double wrap_heading(double h) {
    h = std::fmod(h, kTwoPi);
    if (h < 0.0) h += kTwoPi;
    return h;
}

}  // namespace

UserState gmm_step(const UserState& u, const GmmParams& p, Rng& rng, const Rect& bounds) {
    if (!u.mobile) {
        throw std::logic_error("gmm_step: called on a static user");
    }
    const double a = p.memory;
    const double drift = std::sqrt(std::max(0.0, 1.0 - a * a));

    UserState next = u;
    next.speed = a * u.speed + (1.0 - a) * p.mean_speed + drift * gaussian(rng, p.speed_noise_std);
    next.speed = std::clamp(next.speed, 0.0, p.max_speed);
    next.heading = wrap_heading(a * u.heading + (1.0 - a) * u.mean_heading +
                                drift * gaussian(rng, p.heading_noise_std));

    next.x = u.x + next.speed * std::cos(next.heading) * p.step_duration;
    next.y = u.y + next.speed * std::sin(next.heading) * p.step_duration;

    // Specular reflection at the border; the mean heading reflects with the
    // heading so the recursion does not keep pulling the user into the wall.
    // A corner can need one reflection per axis, hence the loops.
    while (next.x < bounds.x_min || next.x > bounds.x_max) {
        if (next.x < bounds.x_min) {
            next.x = 2.0 * bounds.x_min - next.x;
        } else {
            next.x = 2.0 * bounds.x_max - next.x;
        }
        next.heading = wrap_heading(std::numbers::pi - next.heading);
        next.mean_heading = wrap_heading(std::numbers::pi - next.mean_heading);
    }
    while (next.y < bounds.y_min || next.y > bounds.y_max) {
        if (next.y < bounds.y_min) {
            next.y = 2.0 * bounds.y_min - next.y;
        } else {
            next.y = 2.0 * bounds.y_max - next.y;
        }
        next.heading = wrap_heading(-next.heading);
        next.mean_heading = wrap_heading(-next.mean_heading);
    }
    return next;
}

}  // namespace uavsim
