#pragma once

#include <queue>
#include <string>
#include <vector>

#include "wsopt/env/grid_layout.hpp"
#include "wsopt/env/tabletop_scene.hpp"
#include "wsopt/planning/visibility.hpp"

namespace wsopt {

enum class Violation {
    missing_station,
    duplicate_station,
    station_off_perimeter,
    stations_too_close,
    disconnected,
    bad_interior,
    cube_out_of_bounds,
    cube_overlap,
    duplicate_cube_id,
    barrier_size,
    cube_inside_barrier,
    start_inside_barrier,
    cube_unreachable,
};

inline const char* violation_name(Violation v) {
    switch (v) {
    case Violation::missing_station: return "missing_station";
    case Violation::duplicate_station: return "duplicate_station";
    case Violation::station_off_perimeter: return "station_off_perimeter";
    case Violation::stations_too_close: return "stations_too_close";
    case Violation::disconnected: return "connectivity";
    case Violation::bad_interior: return "bad_interior";
    case Violation::cube_out_of_bounds: return "cube_out_of_bounds";
    case Violation::cube_overlap: return "overlap";
    case Violation::duplicate_cube_id: return "duplicate_cube_id";
    case Violation::barrier_size: return "barrier_size";
    case Violation::cube_inside_barrier: return "cube_inside_barrier";
    case Violation::start_inside_barrier: return "start_inside_barrier";
    case Violation::cube_unreachable: return "cube_unreachable";
    }
    return "unknown";
}

struct ValidityIssue {
    Violation kind;
    std::string detail;
};

/// Every violated invariant; empty iff the configuration is valid.
struct ValidityReport {
    std::vector<ValidityIssue> issues;

    bool ok() const { return issues.empty(); }
    explicit operator bool() const { return ok(); }
    bool has(Violation v) const {
        for (const auto& i : issues)
            if (i.kind == v) return true;
        return false;
    }
    void add(Violation v, std::string detail) { issues.push_back({v, std::move(detail)}); }

    std::string to_string() const {
        std::string s;
        for (const auto& i : issues) s += std::string(violation_name(i.kind)) + ": " + i.detail + "\n";
        return s;
    }
};

struct GridRules {
    int min_station_spacing = 2; // steps along the perimeter ring
};

/// Floor cells reachable from `start` (a station or floor cell).
inline std::vector<char> floor_reach(const GridLayout& g, GridPos start) {
    std::vector<char> seen(g.size(), 0);
    std::queue<GridPos> q;
    seen[g.index(start)] = 1;
    q.push(start);
    while (!q.empty()) {
        const GridPos p = q.front();
        q.pop();
        for (GridPos n : g.neighbors(p)) {
            if (!g.is_floor(n) || seen[g.index(n)]) continue;
            seen[g.index(n)] = 1;
            q.push(n);
        }
    }
    return seen;
}

inline ValidityReport validate(const GridLayout& g, const GridRules& rules = {}) {
    ValidityReport r;
    int counts[kStationCount] = {};
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x) {
            const GridPos p{x, y};
            const Cell& c = g.at(p);
            if (c.kind == CellKind::station) {
                ++counts[static_cast<int>(c.station)];
                if (!g.on_perimeter(p) || g.is_corner(p))
                    r.add(Violation::station_off_perimeter,
                          std::string(station_name(c.station)) + " at " + std::to_string(x) + "," + std::to_string(y));
            } else if (g.on_perimeter(p) != (c.kind == CellKind::counter)) {
                r.add(Violation::bad_interior, "cell " + std::to_string(x) + "," + std::to_string(y));
            }
        }
    for (StationKind k : kAllStations) {
        const int n = counts[static_cast<int>(k)];
        if (n == 0) r.add(Violation::missing_station, std::string(station_name(k)));
        if (n > 1) r.add(Violation::duplicate_station, std::string(station_name(k)) + " x" + std::to_string(n));
    }
    const auto st = g.stations();
    for (std::size_t i = 0; i < st.size(); ++i)
        for (std::size_t j = i + 1; j < st.size(); ++j) {
            const GridPos a = st[i].second, b = st[j].second;
            if (!g.on_perimeter(a) || !g.on_perimeter(b)) continue;
            if (g.perimeter_distance(a, b) < rules.min_station_spacing)
                r.add(Violation::stations_too_close,
                      std::string(station_name(st[i].first)) + "/" + std::string(station_name(st[j].first)));
        }
    if (!st.empty()) {
        // Stations connect through floor only; pass-through of other stations is not allowed.
        std::vector<char> link(g.size(), 0);
        const auto reach = floor_reach(g, st.front().second);
        for (std::size_t i = 1; i < st.size(); ++i) {
            bool ok = false;
            for (GridPos n : g.neighbors(st[i].second))
                if (g.is_floor(n) && reach[g.index(n)]) ok = true;
            if (!ok) r.add(Violation::disconnected, std::string(station_name(st[i].first)) + " not reachable from " +
                                                         std::string(station_name(st.front().first)));
        }
    }
    return r;
}

inline ValidityReport validate(const TabletopScene& s) {
    ValidityReport r;
    for (std::size_t i = 0; i < s.cubes.size(); ++i) {
        const Cube& c = s.cubes[i];
        if (!s.bounds.contains(c.position)) r.add(Violation::cube_out_of_bounds, "cube " + std::to_string(c.id));
        for (std::size_t j = i + 1; j < s.cubes.size(); ++j) {
            if (s.cubes[j].id == c.id) r.add(Violation::duplicate_cube_id, "cube " + std::to_string(c.id));
            if (footprints_overlap(c.position, s.cubes[j].position, s.cube_footprint))
                r.add(Violation::cube_overlap, "cubes " + std::to_string(c.id) + "/" + std::to_string(s.cubes[j].id));
        }
    }
    for (std::size_t i = 0; i < s.barriers.size(); ++i) {
        const Barrier& b = s.barriers[i];
        if (std::fabs(b.length - kBarrierLength) > 1e-9 || std::fabs(b.thickness - kBarrierThickness) > 1e-9)
            r.add(Violation::barrier_size, "barrier " + std::to_string(i));
    }
    const VisibilityGraph graph(s.barriers);
    if (graph.inside_any(s.hand_start)) r.add(Violation::start_inside_barrier, "hand start");
    for (const Cube& c : s.cubes) {
        if (graph.inside_any(c.position)) {
            r.add(Violation::cube_inside_barrier, "cube " + std::to_string(c.id));
            continue;
        }
        if (graph.shortest_path(s.hand_start, c.position).empty())
            r.add(Violation::cube_unreachable, "cube " + std::to_string(c.id));
    }
    return r;
}

} // namespace wsopt
