#pragma once

#include <string>
#include <string_view>
#include <type_traits>

#include "wsopt/core/format.hpp"
#include "wsopt/env/serialize.hpp"
#include "wsopt/eval/dataset.hpp"

namespace wsopt {

// Dataset files:
//   wsopt-dataset v1
//   workspace <hash>
//   domain grid|tabletop
//   traj <goal> <start> <#valid> <valid...> <#points> <x y ...>
//   end

template <class Point>
constexpr const char* dataset_domain() {
    return std::is_same_v<Point, GridPos> ? "grid" : "tabletop";
}

template <class Point>
std::string serialize_dataset(const Dataset<Point>& d, const std::string& workspace_hash) {
    std::string out = "wsopt-dataset v1\nworkspace " + workspace_hash + "\ndomain " + dataset_domain<Point>() + "\n";
    for (const auto& t : d) {
        out += "traj " + std::to_string(t.goal) + " " + std::to_string(t.start) + " " +
               std::to_string(t.valid_goals.size());
        for (GoalId g : t.valid_goals) out += " " + std::to_string(g);
        out += " " + std::to_string(t.points.size());
        for (const Point& p : t.points) {
            if constexpr (std::is_same_v<Point, GridPos>)
                out += " " + std::to_string(p.x) + " " + std::to_string(p.y);
            else
                out += " " + fmt_double(p.x) + " " + fmt_double(p.y);
        }
        out += "\n";
    }
    return out + "end\n";
}

/// Workspace hash recorded in a dataset file, without parsing the rest.
inline std::string dataset_workspace_hash(std::string_view text) {
    detail::LineReader r(text);
    r.expect_header("wsopt-dataset");
    const auto toks = r.next();
    if (toks.size() != 2 || toks[0] != "workspace") r.fail("workspace", "expected 'workspace <hash>'");
    return toks[1];
}

/// Throws HashMismatch unless the dataset was simulated in the workspace
/// with the given hash.
template <class Point>
Dataset<Point> parse_dataset(std::string_view text, const std::string& expected_hash) {
    detail::LineReader r(text);
    r.expect_header("wsopt-dataset");
    auto toks = r.next();
    if (toks.size() != 2 || toks[0] != "workspace") r.fail("workspace", "expected 'workspace <hash>'");
    if (toks[1] != expected_hash)
        throw HashMismatch("dataset was simulated in " + toks[1] + " but is being used with " + expected_hash);
    toks = r.next();
    if (toks.size() != 2 || toks[0] != "domain") r.fail("domain", "expected 'domain <name>'");
    if (toks[1] != dataset_domain<Point>()) r.fail("domain", "expected domain " + std::string(dataset_domain<Point>()));
    Dataset<Point> out;
    while (true) {
        toks = r.next();
        if (toks.empty()) r.fail("end", "unexpected end of file");
        if (toks[0] == "end") break;
        if (toks[0] != "traj") r.fail(toks[0], "expected 'traj' or 'end'");
        std::size_t at = 1;
        auto take = [&](const char* field) -> const std::string& {
            if (at >= toks.size()) r.fail(field, "line ends early");
            return toks[at++];
        };
        LabeledTrajectory<Point> t;
        t.goal = r.integer(take("goal"), "goal");
        t.start = r.integer(take("start"), "start");
        const int nv = r.integer(take("valid"), "valid");
        if (nv <= 0) r.fail("valid", "need at least one valid goal");
        for (int i = 0; i < nv; ++i) t.valid_goals.push_back(r.integer(take("valid"), "valid"));
        const int np = r.integer(take("points"), "points");
        if (np < 2) r.fail("points", "need at least two points");
        for (int i = 0; i < np; ++i) {
            if constexpr (std::is_same_v<Point, GridPos>) {
                const int x = r.integer(take("point"), "point");
                t.points.push_back({x, r.integer(take("point"), "point")});
            } else {
                const double x = r.number(take("point"), "point");
                t.points.push_back({x, r.number(take("point"), "point")});
            }
        }
        if (at != toks.size()) r.fail("traj", "trailing values");
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace wsopt
