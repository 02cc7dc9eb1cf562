#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <tuple>
#include <vector>

#include "wsopt/core/error.hpp"
#include "wsopt/env/grid_layout.hpp"
#include "wsopt/env/trajectory.hpp"

namespace wsopt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Per-cell cost of entering a cell. A trajectory's cost is the sum over the
/// cells it enters (its first point is free), so costs add up under
/// concatenation.
class CostModel {
public:
    CostModel() = default;

    CostModel(int width, int height, std::vector<double> costs)
        : width_(width), height_(height), costs_(std::move(costs)) {
        if (costs_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
            throw InvalidArgument("cost model size does not match grid");
        for (double c : costs_)
            if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("state costs must be finite and strictly positive");
    }

    static CostModel uniform(int width, int height, double c = 1.0) {
        return CostModel(width, height, std::vector<double>(static_cast<std::size_t>(width * height), c));
    }
    static CostModel uniform(const GridLayout& g, double c = 1.0) { return uniform(g.width(), g.height(), c); }

    int width() const { return width_; }
    int height() const { return height_; }
    double operator()(GridPos p) const {
        return costs_[static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(p.x)];
    }
    std::span<const double> values() const { return costs_; }

    CostModel scaled(double k) const {
        std::vector<double> c = costs_;
        for (double& v : c) v *= k;
        return CostModel(width_, height_, std::move(c));
    }

    double path_cost(std::span<const GridPos> points) const {
        double total = 0.0;
        for (std::size_t i = 1; i < points.size(); ++i) total += (*this)(points[i]);
        return total;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> costs_;
};

/// Cost-to-go towards one goal cell over floor cells (plus the goal itself).
/// Cells that are not floor can still be queried as start points: their value
/// is the best first move into a floor neighbour or the goal.
class CostToGo {
public:
    CostToGo(const GridLayout& layout, const CostModel& cost, GridPos goal)
        : layout_(&layout), cost_(&cost), goal_(goal), values_(layout.size(), kInf) {
        if (!layout.in_bounds(goal)) throw InvalidArgument("goal outside the grid");
        using Item = std::tuple<double, std::size_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
        values_[layout.index(goal)] = 0.0;
        open.emplace(0.0, layout.index(goal));
        while (!open.empty()) {
            auto [d, i] = open.top();
            open.pop();
            if (d > values_[i]) continue;
            const GridPos v = layout.pos(i);
            const double through = d + cost(v);
            for (GridPos u : layout.neighbors(v)) {
                if (!layout.is_floor(u)) continue;
                const std::size_t j = layout.index(u);
                if (through < values_[j]) {
                    values_[j] = through;
                    open.emplace(through, j);
                }
            }
        }
    }

    GridPos goal() const { return goal_; }

    /// Optimal cost from `p` to the goal, +inf when unreachable.
    double operator()(GridPos p) const {
        if (p == goal_) return 0.0;
        if (layout_->is_floor(p)) return values_[layout_->index(p)];
        double best = kInf;
        for (GridPos q : layout_->neighbors(p)) best = std::min(best, move_value(q));
        return best;
    }

    /// Cost of stepping into `q` and finishing optimally from there.
    double move_value(GridPos q) const {
        if (q == goal_) return (*cost_)(q);
        if (!layout_->is_floor(q)) return kInf;
        return (*cost_)(q) + values_[layout_->index(q)];
    }

    /// Legal successor cells of `p` on the way to the goal.
    std::vector<GridPos> moves(GridPos p) const {
        std::vector<GridPos> out;
        for (GridPos q : layout_->neighbors(p))
            if (q == goal_ || layout_->is_floor(q)) out.push_back(q);
        return out;
    }

    const GridLayout& layout() const { return *layout_; }
    const CostModel& cost() const { return *cost_; }

private:
    const GridLayout* layout_;
    const CostModel* cost_;
    GridPos goal_;
    std::vector<double> values_;
};

/// Follows the cost-to-go field greedily; among equal-cost successors the
/// lexicographically smallest (x, then y) wins.
inline GridTrajectory follow_optimal(const CostToGo& ctg, GridPos from) {
    GridTrajectory t;
    t.points.push_back(from);
    if (from == ctg.goal()) return t;
    if (!std::isfinite(ctg(from))) throw Unreachable("goal unreachable from start");
    GridPos cur = from;
    const std::size_t limit = ctg.layout().size() + 1;
    while (cur != ctg.goal()) {
        GridPos best{};
        double best_v = kInf;
        for (GridPos q : ctg.moves(cur)) {
            const double v = ctg.move_value(q);
            if (v < best_v) {
                best_v = v;
                best = q;
            }
        }
        if (!std::isfinite(best_v) || t.points.size() > limit) throw Unreachable("goal unreachable from start");
        t.cost += ctg.cost()(best);
        t.points.push_back(best);
        cur = best;
    }
    return t;
}

/// Minimum-cost 4-connected path. Intermediate cells must be floor; the end
/// points may be any cell (stations are entered only as endpoints).
inline GridTrajectory grid_shortest_path(const GridLayout& layout, const CostModel& cost, GridPos from, GridPos to) {
    if (!layout.in_bounds(from) || !layout.in_bounds(to)) throw InvalidArgument("path endpoint outside the grid");
    if (cost.width() != layout.width() || cost.height() != layout.height())
        throw InvalidArgument("cost model does not match layout");
    const CostToGo ctg(layout, cost, to);
    return follow_optimal(ctg, from);
}

} // namespace wsopt
