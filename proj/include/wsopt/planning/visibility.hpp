#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "wsopt/core/error.hpp"
#include "wsopt/env/geometry.hpp"
#include "wsopt/env/tabletop_scene.hpp"
#include "wsopt/env/trajectory.hpp"

namespace wsopt {

/// Visibility graph over barrier corners. Query points are attached on demand;
/// an edge exists iff the open segment avoids every barrier interior.
class VisibilityGraph {
public:
    explicit VisibilityGraph(std::span<const Barrier> barriers) {
        rects_.reserve(barriers.size());
        for (const Barrier& b : barriers) rects_.push_back(b.rect());
        for (const OrientedRect& r : rects_)
            for (Vec2 c : r.corners())
                if (!inside_any(c)) corners_.push_back(c);
        const std::size_t n = corners_.size();
        corner_edges_.assign(n * n, std::numeric_limits<double>::infinity());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (visible(corners_[i], corners_[j]))
                    corner_edges_[i * n + j] = corner_edges_[j * n + i] = distance(corners_[i], corners_[j]);
    }

    bool visible(Vec2 a, Vec2 b) const {
        for (const OrientedRect& r : rects_)
            if (r.segment_hits_interior(a, b)) return false;
        return true;
    }

    bool inside_any(Vec2 p) const {
        for (const OrientedRect& r : rects_)
            if (r.contains(p)) return true;
        return false;
    }

    const std::vector<Vec2>& corners() const { return corners_; }

    /// Shortest barrier-free polyline; empty when `to` is enclosed.
    std::vector<Vec2> shortest_path(Vec2 from, Vec2 to) const {
        if (from == to) return {from};
        if (visible(from, to)) return {from, to};
        const std::size_t n = corners_.size();
        // Node n is `from`, node n + 1 is `to`.
        const std::size_t total = n + 2;
        auto node = [&](std::size_t i) { return i < n ? corners_[i] : (i == n ? from : to); };
        auto weight = [&](std::size_t i, std::size_t j) {
            if (i < n && j < n) return corner_edges_[i * n + j];
            const Vec2 a = node(i), b = node(j);
            return visible(a, b) ? distance(a, b) : std::numeric_limits<double>::infinity();
        };
        std::vector<double> dist(total, std::numeric_limits<double>::infinity());
        std::vector<std::size_t> prev(total, total);
        std::vector<char> done(total, 0);
        dist[n] = 0.0;
        for (std::size_t iter = 0; iter < total; ++iter) {
            std::size_t u = total;
            for (std::size_t i = 0; i < total; ++i)
                if (!done[i] && (u == total || dist[i] < dist[u])) u = i;
            if (u == total || !std::isfinite(dist[u])) break;
            done[u] = 1;
            if (u == n + 1) break;
            for (std::size_t v = 0; v < total; ++v) {
                if (done[v] || v == n) continue;
                const double w = weight(u, v);
                if (dist[u] + w < dist[v]) {
                    dist[v] = dist[u] + w;
                    prev[v] = u;
                }
            }
        }
        if (!std::isfinite(dist[n + 1])) return {};
        std::vector<Vec2> path;
        for (std::size_t v = n + 1; v != total; v = prev[v]) path.push_back(node(v));
        std::reverse(path.begin(), path.end());
        return path;
    }

    /// Length of the shortest barrier-free path, +inf when enclosed.
    double shortest_length(Vec2 from, Vec2 to) const {
        const auto p = shortest_path(from, to);
        if (p.empty()) return std::numeric_limits<double>::infinity();
        return polyline_length(p);
    }

    /// Distance from every corner to `goal` along barrier-free polylines
    /// (+inf where none exists). Lets many sources share one Dijkstra.
    std::vector<double> distance_field(Vec2 goal) const {
        const std::size_t n = corners_.size();
        std::vector<double> dist(n, std::numeric_limits<double>::infinity());
        std::vector<char> done(n, 0);
        for (std::size_t i = 0; i < n; ++i)
            if (visible(corners_[i], goal)) dist[i] = distance(corners_[i], goal);
        for (std::size_t iter = 0; iter < n; ++iter) {
            std::size_t u = n;
            for (std::size_t i = 0; i < n; ++i)
                if (!done[i] && (u == n || dist[i] < dist[u])) u = i;
            if (u == n || !std::isfinite(dist[u])) break;
            done[u] = 1;
            for (std::size_t v = 0; v < n; ++v) {
                const double w = corner_edges_[u * n + v];
                if (!done[v] && dist[u] + w < dist[v]) dist[v] = dist[u] + w;
            }
        }
        return dist;
    }

    /// Shortest barrier-free length from `from` to the goal of `field`.
    double length_via(std::span<const double> field, Vec2 from, Vec2 goal) const {
        if (from == goal) return 0.0;
        double best = visible(from, goal) ? distance(from, goal) : std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < corners_.size(); ++i) {
            if (!std::isfinite(field[i])) continue;
            const double d = distance(from, corners_[i]);
            if (d + field[i] < best && visible(from, corners_[i])) best = d + field[i];
        }
        return best;
    }

    static double polyline_length(std::span<const Vec2> p) {
        double len = 0.0;
        for (std::size_t i = 1; i < p.size(); ++i) len += distance(p[i - 1], p[i]);
        return len;
    }

private:
    std::vector<OrientedRect> rects_;
    std::vector<Vec2> corners_;
    std::vector<double> corner_edges_;
};

inline constexpr double kDensifyStep = 0.01;

/// Subdivides every segment into equal pieces no longer than `step`,
/// keeping the original vertices so that no chord cuts a barrier corner.
inline std::vector<Vec2> densify(std::span<const Vec2> polyline, double step = kDensifyStep) {
    std::vector<Vec2> out;
    if (polyline.empty()) return out;
    out.push_back(polyline.front());
    for (std::size_t i = 1; i < polyline.size(); ++i) {
        const Vec2 a = polyline[i - 1], b = polyline[i];
        const double len = distance(a, b);
        const auto pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / step - 1e-9)));
        for (std::size_t k = 1; k < pieces; ++k) out.push_back(lerp(a, b, static_cast<double>(k) / static_cast<double>(pieces)));
        out.push_back(b);
    }
    return out;
}

/// Minimum-length barrier-avoiding reach, densified to `step`.
inline PlanarTrajectory continuous_shortest_path(const TabletopScene& scene, Vec2 from, Vec2 to,
                                                 double step = kDensifyStep) {
    const VisibilityGraph graph(scene.barriers);
    if (graph.inside_any(from) || graph.inside_any(to)) throw InvalidArgument("path endpoint inside a barrier");
    const auto corners = graph.shortest_path(from, to);
    if (corners.empty()) throw Unreachable("goal enclosed by barriers");
    PlanarTrajectory t;
    t.cost = VisibilityGraph::polyline_length(corners);
    t.points = densify(corners, step);
    return t;
}

} // namespace wsopt
