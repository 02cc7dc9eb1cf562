#pragma once

#include <algorithm>
#include <array>
#include <cstdlib>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wsopt/core/error.hpp"

namespace wsopt {

enum class StationKind : std::uint8_t { pot, dish, serving, onion, tomato, cabbage, fish };

inline constexpr std::array<StationKind, 7> kAllStations = {
    StationKind::pot,   StationKind::dish,    StationKind::serving, StationKind::onion,
    StationKind::tomato, StationKind::cabbage, StationKind::fish};

inline constexpr std::size_t kStationCount = kAllStations.size();

inline constexpr char station_glyph(StationKind k) {
    constexpr char glyphs[] = {'P', 'D', 'S', 'O', 'T', 'C', 'F'};
    return glyphs[static_cast<int>(k)];
}

inline std::optional<StationKind> station_from_glyph(char c) {
    for (StationKind k : kAllStations)
        if (station_glyph(k) == c) return k;
    return std::nullopt;
}

inline std::string_view station_name(StationKind k) {
    constexpr std::string_view names[] = {"pot", "dish", "serving", "onion", "tomato", "cabbage", "fish"};
    return names[static_cast<int>(k)];
}

inline std::optional<StationKind> station_from_name(std::string_view s) {
    for (StationKind k : kAllStations)
        if (station_name(k) == s) return k;
    return std::nullopt;
}

enum class CellKind : std::uint8_t { floor, counter, obstacle, station };

struct Cell {
    CellKind kind = CellKind::floor;
    StationKind station = StationKind::pot; // meaningful only when kind == station

    static constexpr Cell floor() { return {CellKind::floor, StationKind::pot}; }
    static constexpr Cell counter() { return {CellKind::counter, StationKind::pot}; }
    static constexpr Cell obstacle() { return {CellKind::obstacle, StationKind::pot}; }
    static constexpr Cell make_station(StationKind k) { return {CellKind::station, k}; }

    friend bool operator==(const Cell& a, const Cell& b) {
        return a.kind == b.kind && (a.kind != CellKind::station || a.station == b.station);
    }
};

inline char cell_glyph(const Cell& c) {
    switch (c.kind) {
    case CellKind::floor: return '.';
    case CellKind::counter: return '#';
    case CellKind::obstacle: return 'x';
    case CellKind::station: return station_glyph(c.station);
    }
    return '?';
}

struct GridPos {
    int x = 0;
    int y = 0;
    friend auto operator<=>(const GridPos&, const GridPos&) = default;
};

inline int manhattan(GridPos a, GridPos b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }
inline bool adjacent4(GridPos a, GridPos b) { return manhattan(a, b) == 1; }

/// Rectangular grid workspace. Cells on the outer ring are counters or
/// stations; interior cells are floor or virtual obstacles. Plain open grids
/// (every cell floor) are also representable for planner tests.
class GridLayout {
public:
    GridLayout() = default;

    GridLayout(int width, int height, Cell fill) : width_(width), height_(height) {
        if (width <= 0 || height <= 0) throw InvalidArgument("grid dimensions must be positive");
        cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    /// Counter ring around a floor interior.
    static GridLayout kitchen(int width, int height) {
        if (width < 3 || height < 3) throw InvalidArgument("kitchen layouts need at least 3x3 cells");
        GridLayout g(width, height, Cell::floor());
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                if (g.on_perimeter({x, y})) g.set({x, y}, Cell::counter());
        return g;
    }

    static GridLayout open(int width, int height) { return GridLayout(width, height, Cell::floor()); }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return cells_.size(); }

    bool in_bounds(GridPos p) const { return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_; }
    std::size_t index(GridPos p) const {
        return static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(p.x);
    }
    GridPos pos(std::size_t i) const {
        return {static_cast<int>(i % static_cast<std::size_t>(width_)), static_cast<int>(i / static_cast<std::size_t>(width_))};
    }

    const Cell& at(GridPos p) const { return cells_.at(index(p)); }
    void set(GridPos p, Cell c) { cells_.at(index(p)) = c; }

    bool on_perimeter(GridPos p) const {
        return p.x == 0 || p.y == 0 || p.x == width_ - 1 || p.y == height_ - 1;
    }
    bool is_corner(GridPos p) const {
        return (p.x == 0 || p.x == width_ - 1) && (p.y == 0 || p.y == height_ - 1);
    }
    bool is_floor(GridPos p) const { return in_bounds(p) && at(p).kind == CellKind::floor; }

    /// 4-neighbours in lexicographic (x, then y) order.
    std::vector<GridPos> neighbors(GridPos p) const {
        std::vector<GridPos> out;
        out.reserve(4);
        for (GridPos q : {GridPos{p.x - 1, p.y}, GridPos{p.x, p.y - 1}, GridPos{p.x, p.y + 1}, GridPos{p.x + 1, p.y}})
            if (in_bounds(q)) out.push_back(q);
        return out;
    }

    std::optional<GridPos> station_position(StationKind k) const {
        for (std::size_t i = 0; i < cells_.size(); ++i)
            if (cells_[i].kind == CellKind::station && cells_[i].station == k) return pos(i);
        return std::nullopt;
    }

    /// Required station position; throws when absent.
    GridPos station(StationKind k) const {
        auto p = station_position(k);
        if (!p) throw InvalidArgument("layout has no " + std::string(station_name(k)) + " station");
        return *p;
    }

    /// Stations in row-major reading order (top-to-bottom, left-to-right).
    std::vector<std::pair<StationKind, GridPos>> stations() const {
        std::vector<std::pair<StationKind, GridPos>> out;
        for (std::size_t i = 0; i < cells_.size(); ++i)
            if (cells_[i].kind == CellKind::station) out.emplace_back(cells_[i].station, pos(i));
        return out;
    }

    int obstacle_count() const {
        int n = 0;
        for (const Cell& c : cells_) n += c.kind == CellKind::obstacle;
        return n;
    }

    int interior_count() const { return std::max(0, width_ - 2) * std::max(0, height_ - 2); }

    /// Position along the clockwise perimeter ring starting at (0, 0).
    int ring_index(GridPos p) const {
        const int w = width_, h = height_;
        if (p.y == 0) return p.x;
        if (p.x == w - 1) return (w - 1) + p.y;
        if (p.y == h - 1) return (w - 1) + (h - 1) + (w - 1 - p.x);
        return 2 * (w - 1) + (h - 1) + (h - 1 - p.y);
    }
    int ring_length() const { return 2 * (width_ - 1) + 2 * (height_ - 1); }

    /// Number of steps between two perimeter cells walking along the ring.
    int perimeter_distance(GridPos a, GridPos b) const {
        const int d = std::abs(ring_index(a) - ring_index(b));
        return std::min(d, ring_length() - d);
    }

    /// Non-corner perimeter cells in ring order; the only legal station slots.
    std::vector<GridPos> station_slots() const {
        std::vector<std::pair<int, GridPos>> slots;
        for (int y = 0; y < height_; ++y)
            for (int x = 0; x < width_; ++x) {
                GridPos p{x, y};
                if (on_perimeter(p) && !is_corner(p)) slots.emplace_back(ring_index(p), p);
            }
        std::sort(slots.begin(), slots.end());
        std::vector<GridPos> out;
        for (auto& [_, p] : slots) out.push_back(p);
        return out;
    }

    friend bool operator==(const GridLayout&, const GridLayout&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<Cell> cells_;
};

} // namespace wsopt
