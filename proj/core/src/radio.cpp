#include "uavsim/radio.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace uavsim {

void ChannelParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) {
            throw std::invalid_argument(std::string("ChannelParams: ") + name +
                                        " must be strictly positive");
        }
    };
    positive(attenuation, "attenuation");
    positive(pathloss_exponent, "pathloss_exponent");
    positive(tx_power_w, "tx_power_w");
    positive(noise_power_w, "noise_power_w");
    positive(bandwidth_hz, "bandwidth_hz");
    positive(sinr_threshold, "sinr_threshold");
    if (pathloss_exponent < 1.0) {
        throw std::invalid_argument("ChannelParams: pathloss_exponent must be >= 1");
    }
}

namespace {

// beta * P * d^-alpha
double received_power(const Vec3& user, const Vec3& uav, const ChannelParams& ch) {
    const double d = distance(user, uav);
    if (d <= 0.0) {
        throw std::domain_error("sinr: user and UAV positions coincide (d = 0)");
    }
    return ch.attenuation * ch.tx_power_w * std::pow(d, -ch.pathloss_exponent);
}

double sinr_masked(const Vec3& user_pos, std::size_t serving, const std::vector<Vec3>& uavs,
                   const ChannelParams& ch, const std::vector<bool>* active) {
    const double signal = received_power(user_pos, uavs[serving], ch);
    double interference = 0.0;
    for (std::size_t z = 0; z < uavs.size(); ++z) {
        if (z == serving) continue;
        if (active && !(*active)[z]) continue;
        interference += received_power(user_pos, uavs[z], ch);
    }
    return signal / (interference + ch.noise_power_w);
}

}  // namespace

double sinr(const Vec3& user_pos, std::size_t serving, const std::vector<Vec3>& uav_positions,
            const ChannelParams& ch) {
    if (serving >= uav_positions.size()) {
        throw std::out_of_range("sinr: serving UAV index out of range");
    }
    return sinr_masked(user_pos, serving, uav_positions, ch, nullptr);
}

AssociationMap associate(const std::vector<Vec3>& users, const std::vector<Vec3>& uavs,
                         const ChannelParams& ch, const std::vector<bool>& active) {
    if (uavs.empty()) {
        throw std::invalid_argument("associate: at least one UAV required");
    }
    if (active.size() != uavs.size()) {
        throw std::invalid_argument("associate: active mask length mismatch");
    }
    AssociationMap out;
    out.serving.assign(users.size(), -1);
    out.sinr.assign(users.size(), 0.0);
    out.rate.assign(users.size(), 0.0);

    for (std::size_t i = 0; i < users.size(); ++i) {
        int best = -1;
        double best_sinr = 0.0;
        for (std::size_t j = 0; j < uavs.size(); ++j) {
            if (!active[j]) continue;
            const double g = sinr_masked(users[i], j, uavs, ch, &active);
            if (best < 0 || g > best_sinr) {
                best = static_cast<int>(j);
                best_sinr = g;
            }
        }
        if (best < 0) continue;  // no active UAV
        out.sinr[i] = best_sinr;
        if (best_sinr > ch.sinr_threshold) {
            out.serving[i] = best;
            out.rate[i] = ch.bandwidth_hz * std::log2(1.0 + best_sinr);
        }
    }
    return out;
}

AssociationMap associate(const std::vector<Vec3>& users, const std::vector<Vec3>& uavs,
                         const ChannelParams& ch) {
    return associate(users, uavs, ch, std::vector<bool>(uavs.size(), true));
}

double system_throughput(const AssociationMap& assoc) {
    double total = 0.0;
    for (double r : assoc.rate) total += r;
    return total;
}

std::vector<int> connectivity_scores(const AssociationMap& assoc, std::size_t n_uavs) {
    std::vector<int> scores(n_uavs, 0);
    for (int j : assoc.serving) {
        if (j >= 0) ++scores[static_cast<std::size_t>(j)];
    }
    return scores;
}

std::size_t outage_count(const AssociationMap& assoc) {
    std::size_t n = 0;
    for (int j : assoc.serving) {
        if (j < 0) ++n;
    }
    return n;
}

}  // namespace uavsim
