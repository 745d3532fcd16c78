#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace uavsim {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }

inline double norm(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

/// Axis-aligned ground rectangle, metres.
struct Rect {
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;

    bool contains(double x, double y) const {
        return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
    }
    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
};

/// The seven discrete UAV moves, in fixed index order.
enum class Action : int {
    PosX = 0,
    NegX = 1,
    PosY = 2,
    NegY = 3,
    PosZ = 4,
    NegZ = 5,
    Hover = 6,
};

inline constexpr int kNumActions = 7;

/// Displacement vector of an action given the per-axis step distances.
inline Vec3 action_displacement(Action a, double step_x, double step_y, double step_z) {
    switch (a) {
        case Action::PosX: return {step_x, 0.0, 0.0};
        case Action::NegX: return {-step_x, 0.0, 0.0};
        case Action::PosY: return {0.0, step_y, 0.0};
        case Action::NegY: return {0.0, -step_y, 0.0};
        case Action::PosZ: return {0.0, 0.0, step_z};
        case Action::NegZ: return {0.0, 0.0, -step_z};
        case Action::Hover: return {0.0, 0.0, 0.0};
    }
    return {0.0, 0.0, 0.0};
}

inline constexpr std::size_t kObservationSize = 5;

/// Per-agent observation: normalized x, y, h, connectivity score, remaining energy.
using Observation = std::array<double, kObservationSize>;

}  // namespace uavsim
