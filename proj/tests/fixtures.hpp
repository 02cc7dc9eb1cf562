#pragma once

#include <string>
#include <vector>

#include "wsopt/env/grid_layout.hpp"
#include "wsopt/env/tabletop_scene.hpp"

namespace fixtures {

using namespace wsopt;

inline GridLayout grid_from_rows(const std::vector<std::string>& rows) {
    GridLayout g(static_cast<int>(rows.front().size()), static_cast<int>(rows.size()), Cell::floor());
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x) {
            const char c = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
            if (c == '#') g.set({x, y}, Cell::counter());
            else if (c == 'x') g.set({x, y}, Cell::obstacle());
            else if (auto k = station_from_glyph(c)) g.set({x, y}, Cell::make_station(*k));
        }
    return g;
}

inline GridLayout kitchen5() {
    return grid_from_rows({
        "#P#D#",
        "S...O",
        "#...#",
        "T...C",
        "#F###",
    });
}

inline GridLayout kitchen7() {
    return grid_from_rows({
        "#P#D#O#",
        "#.....#",
        "S.....C",
        "#.....#",
        "T.....#",
        "#.....#",
        "###F###",
    });
}

/// Eight cubes in two labelled rows, well inside the table.
inline TabletopScene eight_cube_scene() {
    TabletopScene s;
    const double xs[4] = {0.18, 0.26, 0.34, 0.42};
    for (int i = 0; i < 4; ++i) s.cubes.push_back({i, "square", {xs[i], 0.26}});
    for (int i = 0; i < 4; ++i) s.cubes.push_back({4 + i, "triangle", {xs[i], 0.34}});
    return s;
}

} // namespace fixtures
