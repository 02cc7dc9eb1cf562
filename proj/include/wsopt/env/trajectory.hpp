#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "wsopt/env/geometry.hpp"
#include "wsopt/env/grid_layout.hpp"

namespace wsopt {

/// Ordered positions with the accumulated cost of the moves between them.
/// Grid trajectories move between 4-connected cells; planar ones between
/// barrier-free points.
template <class Point>
struct Trajectory {
    std::vector<Point> points;
    double cost = 0.0;

    std::size_t steps() const { return points.empty() ? 0 : points.size() - 1; }
    const Point& front() const { return points.front(); }
    const Point& back() const { return points.back(); }
};

using GridTrajectory = Trajectory<GridPos>;
using PlanarTrajectory = Trajectory<Vec2>;

/// Number of steps kept when observing `fraction` of a trajectory with
/// `steps` moves: ceil(fraction * steps), at least one move when any exist.
inline std::size_t prefix_steps(std::size_t steps, double fraction) {
    if (steps == 0) return 0;
    if (fraction >= 1.0) return steps;
    auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(steps) - 1e-12));
    if (k < 1) k = 1;
    if (k > steps) k = steps;
    return k;
}

/// First `steps` moves of a point sequence (steps + 1 points).
template <class Point>
std::vector<Point> take_prefix(const std::vector<Point>& points, std::size_t steps) {
    const std::size_t n = std::min(points.size(), steps + 1);
    return std::vector<Point>(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(n));
}

} // namespace wsopt
