#pragma once

#include "uavsim/rng.hpp"
#include "uavsim/types.hpp"

namespace uavsim {

/// Uniform draw over the 7 discrete actions.
inline int random_action(Rng& rng) {
    return std::uniform_int_distribution<int>(0, kNumActions - 1)(rng);
}

/// Non-learning comparison policy: every action uniform at random.
class RandomPolicy {
public:
    explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}
    int act() { return random_action(rng_); }

private:
    Rng rng_;
};

}  // namespace uavsim
