#pragma once

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wsopt/core/error.hpp"
#include "wsopt/core/format.hpp"
#include "wsopt/core/hash.hpp"
#include "wsopt/env/grid_layout.hpp"
#include "wsopt/env/tabletop_scene.hpp"
#include "wsopt/env/task_graph.hpp"

namespace wsopt {

// Canonical text forms. Field order is fixed and numbers use the shortest
// round-trip representation, so serialize(parse(s)) == s for canonical s.

inline std::string render_ascii(const GridLayout& g) {
    std::string out;
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) out += cell_glyph(g.at({x, y}));
        out += '\n';
    }
    return out;
}

inline std::string serialize(const GridLayout& g) {
    std::string out = "wsopt-grid v1\nsize " + std::to_string(g.width()) + " " + std::to_string(g.height()) + "\n";
    for (int y = 0; y < g.height(); ++y) {
        out += "row ";
        for (int x = 0; x < g.width(); ++x) out += cell_glyph(g.at({x, y}));
        out += '\n';
    }
    out += "end\n";
    return out;
}

inline std::string serialize(const TabletopScene& s) {
    std::string out = "wsopt-tabletop v1\n";
    out += "bounds " + fmt_double(s.bounds.min_x) + " " + fmt_double(s.bounds.min_y) + " " + fmt_double(s.bounds.max_x) +
           " " + fmt_double(s.bounds.max_y) + "\n";
    out += "hand_start " + fmt_double(s.hand_start.x) + " " + fmt_double(s.hand_start.y) + "\n";
    out += "footprint " + fmt_double(s.cube_footprint) + "\n";
    for (const Cube& c : s.cubes)
        out += "cube " + std::to_string(c.id) + " " + c.label + " " + fmt_double(c.position.x) + " " +
               fmt_double(c.position.y) + "\n";
    for (const Barrier& b : s.barriers)
        out += "barrier " + fmt_double(b.center.x) + " " + fmt_double(b.center.y) + " " + fmt_double(b.angle) + " " +
               fmt_double(b.length) + " " + fmt_double(b.thickness) + "\n";
    out += "end\n";
    return out;
}

inline std::string serialize(const TaskGraph& t) {
    std::string out = "wsopt-task v1\ninitial " + std::to_string(t.initial_location()) + "\n";
    for (const auto& [g, name] : t.goal_names()) out += "goal " + std::to_string(g) + " " + name + "\n";
    for (const Subtask& s : t.subtasks()) {
        out += "subtask " + std::to_string(s.id) + " " + s.name + " finish " + std::to_string(s.finish_location) +
               " goals";
        for (GoalId g : s.goals) out += " " + std::to_string(g);
        out += '\n';
    }
    for (auto [a, b] : t.edges()) out += "edge " + std::to_string(a) + " " + std::to_string(b) + "\n";
    out += "end\n";
    return out;
}

/// Stable fingerprint of a layout/scene, embedded in model files.
template <class Layout>
std::string layout_hash(const Layout& layout) {
    return hash_hex(serialize(layout));
}

namespace detail {

struct LineReader {
    std::istringstream in;
    std::size_t line_no = 0;

    explicit LineReader(std::string_view text) : in(std::string(text)) {}

    /// Next non-empty, non-comment line split into tokens; empty at EOF.
    std::vector<std::string> next() {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            const auto toks = split_ws(line);
            if (toks.empty() || toks.front().front() == '#') continue;
            return {toks.begin(), toks.end()};
        }
        return {};
    }

    [[noreturn]] void fail(const std::string& field, const std::string& what) const {
        throw ParseError(line_no, field, what);
    }

    double number(const std::string& tok, const std::string& field) const {
        auto v = parse_double(tok);
        if (!v) fail(field, "expected a number, got '" + tok + "'");
        return *v;
    }

    int integer(const std::string& tok, const std::string& field) const {
        auto v = parse_int(tok);
        if (!v) fail(field, "expected an integer, got '" + tok + "'");
        return static_cast<int>(*v);
    }

    void expect_header(const std::string& magic) {
        auto toks = next();
        if (toks.size() != 2 || toks[0] != magic) fail("header", "expected '" + magic + " v1'");
        if (toks[1] != "v1") fail("version", "unsupported version '" + toks[1] + "'");
    }

    void expect_arity(const std::vector<std::string>& toks, std::size_t n) const {
        if (toks.size() != n) fail(toks.front(), "expected " + std::to_string(n - 1) + " values");
    }
};

} // namespace detail

inline GridLayout parse_grid_layout(std::string_view text) {
    detail::LineReader r(text);
    r.expect_header("wsopt-grid");
    auto toks = r.next();
    if (toks.empty() || toks[0] != "size") r.fail("size", "expected 'size <width> <height>'");
    r.expect_arity(toks, 3);
    const int w = r.integer(toks[1], "size"), h = r.integer(toks[2], "size");
    if (w <= 0 || h <= 0 || w > 256 || h > 256) r.fail("size", "dimensions out of range");
    GridLayout g(w, h, Cell::floor());
    int y = 0;
    for (;;) {
        toks = r.next();
        if (toks.empty()) r.fail("end", "unexpected end of input");
        if (toks[0] == "end") break;
        if (toks[0] != "row") r.fail(toks[0], "unknown record");
        r.expect_arity(toks, 2);
        if (y >= h) r.fail("row", "more rows than declared height");
        const std::string& row = toks[1];
        if (static_cast<int>(row.size()) != w) r.fail("row", "row width " + std::to_string(row.size()) + " != " + std::to_string(w));
        for (int x = 0; x < w; ++x) {
            const char c = row[static_cast<std::size_t>(x)];
            Cell cell;
            if (c == '.') cell = Cell::floor();
            else if (c == '#') cell = Cell::counter();
            else if (c == 'x') cell = Cell::obstacle();
            else if (auto k = station_from_glyph(c)) cell = Cell::make_station(*k);
            else r.fail("row", std::string("unknown cell glyph '") + c + "'");
            g.set({x, y}, cell);
        }
        ++y;
    }
    if (y != h) r.fail("row", "expected " + std::to_string(h) + " rows, got " + std::to_string(y));
    return g;
}

inline TabletopScene parse_tabletop_scene(std::string_view text) {
    detail::LineReader r(text);
    r.expect_header("wsopt-tabletop");
    TabletopScene s;
    s.cubes.clear();
    for (;;) {
        auto toks = r.next();
        if (toks.empty()) r.fail("end", "unexpected end of input");
        const std::string& key = toks[0];
        if (key == "end") break;
        if (key == "bounds") {
            r.expect_arity(toks, 5);
            s.bounds = {r.number(toks[1], key), r.number(toks[2], key), r.number(toks[3], key), r.number(toks[4], key)};
        } else if (key == "hand_start") {
            r.expect_arity(toks, 3);
            s.hand_start = {r.number(toks[1], key), r.number(toks[2], key)};
        } else if (key == "footprint") {
            r.expect_arity(toks, 2);
            s.cube_footprint = r.number(toks[1], key);
        } else if (key == "cube") {
            r.expect_arity(toks, 5);
            s.cubes.push_back({r.integer(toks[1], key), toks[2], {r.number(toks[3], key), r.number(toks[4], key)}});
        } else if (key == "barrier") {
            r.expect_arity(toks, 6);
            s.barriers.push_back({{r.number(toks[1], key), r.number(toks[2], key)}, r.number(toks[3], key),
                                  r.number(toks[4], key), r.number(toks[5], key)});
        } else {
            r.fail(key, "unknown record");
        }
    }
    return s;
}

inline TaskGraph parse_task_graph(std::string_view text) {
    detail::LineReader r(text);
    r.expect_header("wsopt-task");
    int initial = kDefaultStart;
    std::map<GoalId, std::string> names;
    std::vector<Subtask> subtasks;
    std::vector<std::pair<int, int>> edges;
    for (;;) {
        auto toks = r.next();
        if (toks.empty()) r.fail("end", "unexpected end of input");
        const std::string& key = toks[0];
        if (key == "end") break;
        if (key == "initial") {
            r.expect_arity(toks, 2);
            initial = r.integer(toks[1], key);
        } else if (key == "goal") {
            r.expect_arity(toks, 3);
            names[r.integer(toks[1], key)] = toks[2];
        } else if (key == "subtask") {
            if (toks.size() < 7 || toks[3] != "finish" || toks[5] != "goals")
                r.fail(key, "expected 'subtask <id> <name> finish <loc> goals <g>...'");
            Subtask s{r.integer(toks[1], key), toks[2], {}, r.integer(toks[4], "finish")};
            for (std::size_t i = 6; i < toks.size(); ++i) s.goals.push_back(r.integer(toks[i], "goals"));
            subtasks.push_back(std::move(s));
        } else if (key == "edge") {
            r.expect_arity(toks, 3);
            edges.emplace_back(r.integer(toks[1], key), r.integer(toks[2], key));
        } else {
            r.fail(key, "unknown record");
        }
    }
    try {
        return TaskGraph(std::move(subtasks), std::move(edges), initial, std::move(names));
    } catch (const CycleError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(r.line_no, "task", e.what());
    }
}

} // namespace wsopt
