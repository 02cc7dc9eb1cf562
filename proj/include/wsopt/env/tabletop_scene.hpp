#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "wsopt/env/geometry.hpp"

namespace wsopt {

inline constexpr double kBarrierLength = 0.30;
inline constexpr double kBarrierThickness = 0.01;
inline constexpr double kDefaultCubeFootprint = 0.05;

struct Cube {
    int id = 0;
    std::string label;
    Vec2 position;
    friend bool operator==(const Cube&, const Cube&) = default;
};

/// Virtual obstacle projected onto the table.
struct Barrier {
    Vec2 center;
    double angle = 0.0;
    double length = kBarrierLength;
    double thickness = kBarrierThickness;

    OrientedRect rect() const { return {center, angle, length, thickness}; }
    friend bool operator==(const Barrier&, const Barrier&) = default;
};

/// Planar workspace: cubes to fetch, barriers, reachable extents and the
/// resting position of the hand. Units are meters.
struct TabletopScene {
    std::vector<Cube> cubes;
    std::vector<Barrier> barriers;
    Bounds bounds{0.0, 0.0, 0.6, 0.4};
    Vec2 hand_start{0.3, 0.0};
    double cube_footprint = kDefaultCubeFootprint;

    const Cube* find_cube(int id) const {
        for (const Cube& c : cubes)
            if (c.id == id) return &c;
        return nullptr;
    }

    friend bool operator==(const TabletopScene&, const TabletopScene&) = default;
};

/// Square footprints overlap when both axis offsets are below the side length.
inline bool footprints_overlap(Vec2 a, Vec2 b, double side) {
    return std::fabs(a.x - b.x) < side && std::fabs(a.y - b.y) < side;
}

/// Perpendicular-bisector barrier between two points.
inline Barrier barrier_between(Vec2 a, Vec2 b) {
    const Vec2 mid = lerp(a, b, 0.5);
    double angle = std::atan2(b.y - a.y, b.x - a.x) + std::numbers::pi / 2.0;
    angle = std::fmod(angle, std::numbers::pi);
    if (angle < 0.0) angle += std::numbers::pi;
    return Barrier{mid, angle, kBarrierLength, kBarrierThickness};
}

} // namespace wsopt
