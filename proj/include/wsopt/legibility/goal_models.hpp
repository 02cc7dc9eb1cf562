#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "wsopt/env/grid_layout.hpp"
#include "wsopt/env/tabletop_scene.hpp"
#include "wsopt/env/task_graph.hpp"
#include "wsopt/legibility/posterior.hpp"
#include "wsopt/planning/grid_planner.hpp"
#include "wsopt/planning/visibility.hpp"

namespace wsopt {

/// Station goals of a kitchen layout, keyed by station kind.
inline std::vector<std::pair<GoalId, GridPos>> station_goals(const GridLayout& layout) {
    std::vector<std::pair<GoalId, GridPos>> out;
    for (auto [kind, pos] : layout.stations()) out.emplace_back(static_cast<GoalId>(kind), pos);
    std::sort(out.begin(), out.end());
    return out;
}

/// Grid goals and their cost-to-go fields under one cost model. Locations
/// used as stage starts share the goal id space (station kinds).
class GridGoalModel {
public:
    using Point = GridPos;

    GridGoalModel(GridLayout layout, CostModel cost, std::vector<std::pair<GoalId, GridPos>> goals)
        : layout_(std::make_unique<GridLayout>(std::move(layout))), cost_(std::make_unique<CostModel>(std::move(cost))) {
        if (cost_->width() != layout_->width() || cost_->height() != layout_->height())
            throw InvalidArgument("cost model does not match layout");
        for (auto [g, p] : goals) {
            if (!layout_->in_bounds(p)) throw InvalidArgument("goal outside the grid");
            locations_[g] = p;
            fields_.emplace(g, std::make_unique<CostToGo>(*layout_, *cost_, p));
        }
    }

    /// Kitchen layout with every station as a goal.
    GridGoalModel(const GridLayout& layout, const CostModel& cost)
        : GridGoalModel(layout, cost, station_goals(layout)) {}

    const GridLayout& layout() const { return *layout_; }
    const CostModel& cost() const { return *cost_; }

    GridPos location(GoalId g) const {
        const auto it = locations_.find(g);
        if (it == locations_.end()) throw InvalidArgument("unknown goal " + std::to_string(g));
        return it->second;
    }
    GridPos start_point(int location) const { return this->location(location); }

    const CostToGo& field(GoalId g) const {
        const auto it = fields_.find(g);
        if (it == fields_.end()) throw InvalidArgument("unknown goal " + std::to_string(g));
        return *it->second;
    }

    double optimal_cost(GridPos from, GoalId g) const { return field(g)(from); }
    GridTrajectory optimal(GridPos from, GoalId g) const { return follow_optimal(field(g), from); }

    GoalPosterior posterior(std::span<const GridPos> prefix, std::span<const GoalId> goals) const {
        if (prefix.empty()) throw InvalidArgument("empty prefix");
        const double c_prefix = cost_->path_cost(prefix);
        std::vector<double> to_go(goals.size()), optimal_from_start(goals.size());
        for (std::size_t i = 0; i < goals.size(); ++i) {
            const CostToGo& f = field(goals[i]);
            to_go[i] = f(prefix.back());
            optimal_from_start[i] = f(prefix.front());
        }
        return posterior_from_costs(goals, c_prefix, to_go, optimal_from_start);
    }

    /// Kitchen stages only score trips ending at the dish or an ingredient.
    static bool scored(GoalId g) {
        return g != static_cast<GoalId>(StationKind::pot) && g != static_cast<GoalId>(StationKind::serving);
    }

private:
    std::unique_ptr<GridLayout> layout_;
    std::unique_ptr<CostModel> cost_;
    std::map<GoalId, GridPos> locations_;
    std::map<GoalId, std::unique_ptr<CostToGo>> fields_;
};

/// Path costs for the tabletop are in centimetres so that the posterior's
/// exponent has the same scale as one grid step per cell.
inline constexpr double kTabletopCostScale = 100.0;

class TabletopGoalModel {
public:
    using Point = Vec2;

    explicit TabletopGoalModel(TabletopScene scene, double cost_scale = kTabletopCostScale,
                               double densify_step = kDensifyStep)
        : scene_(std::move(scene)), graph_(scene_.barriers), scale_(cost_scale), step_(densify_step) {
        if (!(cost_scale > 0.0)) throw InvalidArgument("cost scale must be positive");
        for (const Cube& c : scene_.cubes) {
            fields_[c.id] = graph_.distance_field(c.position);
            const auto corners = graph_.shortest_path(scene_.hand_start, c.position);
            if (corners.empty()) continue;
            PlanarTrajectory t;
            t.cost = VisibilityGraph::polyline_length(corners);
            t.points = densify(corners, step_);
            from_start_[c.id] = std::move(t);
        }
    }

    const TabletopScene& scene() const { return scene_; }
    const VisibilityGraph& graph() const { return graph_; }
    double cost_scale() const { return scale_; }

    Vec2 location(GoalId g) const {
        const Cube* c = scene_.find_cube(g);
        if (!c) throw InvalidArgument("unknown cube " + std::to_string(g));
        return c->position;
    }
    Vec2 start_point(int) const { return scene_.hand_start; }

    double optimal_cost(Vec2 from, GoalId g) const {
        const auto it = fields_.find(g);
        if (it == fields_.end()) throw InvalidArgument("unknown cube " + std::to_string(g));
        return scale_ * graph_.length_via(it->second, from, location(g));
    }

    PlanarTrajectory optimal(Vec2 from, GoalId g) const {
        if (from == scene_.hand_start) {
            const auto it = from_start_.find(g);
            if (it != from_start_.end()) return it->second;
        }
        const auto corners = graph_.shortest_path(from, location(g));
        if (corners.empty()) throw Unreachable("cube enclosed by barriers");
        PlanarTrajectory t;
        t.cost = VisibilityGraph::polyline_length(corners);
        t.points = densify(corners, step_);
        return t;
    }

    GoalPosterior posterior(std::span<const Vec2> prefix, std::span<const GoalId> goals) const {
        if (prefix.empty()) throw InvalidArgument("empty prefix");
        const double c_prefix = scale_ * VisibilityGraph::polyline_length(prefix);
        std::vector<double> to_go(goals.size()), optimal_from_start(goals.size());
        for (std::size_t i = 0; i < goals.size(); ++i) {
            to_go[i] = optimal_cost(prefix.back(), goals[i]);
            optimal_from_start[i] = optimal_cost(prefix.front(), goals[i]);
        }
        return posterior_from_costs(goals, c_prefix, to_go, optimal_from_start);
    }

    static bool scored(GoalId) { return true; }

private:
    TabletopScene scene_;
    VisibilityGraph graph_;
    double scale_;
    double step_;
    std::map<GoalId, std::vector<double>> fields_;
    std::map<GoalId, PlanarTrajectory> from_start_;
};

} // namespace wsopt
