#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "wsopt/env/grid_layout.hpp"
#include "wsopt/env/tabletop_scene.hpp"
#include "wsopt/legibility/posterior.hpp"

namespace wsopt {

/// One-hot posterior on the goal whose distance from the prefix end is
/// smallest; ties go to the lowest goal id.
template <class Point, class Locate, class Dist>
GoalPosterior nearest_goal(const Point& last, std::span<const GoalId> goals, Locate&& locate, Dist&& dist) {
    if (goals.empty()) throw InvalidArgument("empty goal set");
    std::vector<GoalId> sorted(goals.begin(), goals.end());
    std::sort(sorted.begin(), sorted.end());
    GoalId best = sorted.front();
    double best_d = dist(last, locate(best));
    for (GoalId g : sorted) {
        const double d = dist(last, locate(g));
        if (d < best_d) {
            best_d = d;
            best = g;
        }
    }
    return GoalPosterior::one_hot(sorted, best);
}

/// Manhattan distance to each station.
inline GoalPosterior nearest_goal_heuristic(const GridLayout& layout, std::span<const GridPos> prefix,
                                            std::span<const GoalId> goals) {
    if (prefix.empty()) throw InvalidArgument("empty prefix");
    return nearest_goal(
        prefix.back(), goals, [&](GoalId g) { return layout.station(static_cast<StationKind>(g)); },
        [](GridPos a, GridPos b) { return static_cast<double>(manhattan(a, b)); });
}

/// Euclidean distance to each cube.
inline GoalPosterior nearest_goal_heuristic(const TabletopScene& scene, std::span<const Vec2> prefix,
                                            std::span<const GoalId> goals) {
    if (prefix.empty()) throw InvalidArgument("empty prefix");
    return nearest_goal(
        prefix.back(), goals,
        [&](GoalId g) {
            const Cube* c = scene.find_cube(g);
            if (!c) throw InvalidArgument("unknown cube " + std::to_string(g));
            return c->position;
        },
        [](Vec2 a, Vec2 b) { return distance(a, b); });
}

} // namespace wsopt
