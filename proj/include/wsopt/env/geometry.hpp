#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>

namespace wsopt {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline Vec2 lerp(Vec2 a, Vec2 b, double t) { return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t}; }

/// Rectangle of given full length (along `angle`) and thickness.
struct OrientedRect {
    Vec2 center;
    double angle = 0.0;
    double length = 0.0;
    double thickness = 0.0;

    Vec2 axis() const { return {std::cos(angle), std::sin(angle)}; }
    Vec2 normal() const { return {-std::sin(angle), std::cos(angle)}; }

    Vec2 to_local(Vec2 p) const {
        const Vec2 d = p - center;
        return {dot(d, axis()), dot(d, normal())};
    }

    std::array<Vec2, 4> corners() const {
        const Vec2 u = 0.5 * length * axis();
        const Vec2 v = 0.5 * thickness * normal();
        return {center + u + v, center - u + v, center - u - v, center + u - v};
    }

    /// Strict interior test, shrunk by `eps` so boundary points do not count.
    bool contains(Vec2 p, double eps = 1e-9) const {
        const Vec2 l = to_local(p);
        return std::fabs(l.x) < 0.5 * length - eps && std::fabs(l.y) < 0.5 * thickness - eps;
    }

    /// True when the segment a-b passes through the open interior. Grazing an
    /// edge or touching a corner is allowed.
    bool segment_hits_interior(Vec2 a, Vec2 b, double eps = 1e-9) const {
        const Vec2 la = to_local(a);
        const Vec2 lb = to_local(b);
        const double hx = 0.5 * length - eps;
        const double hy = 0.5 * thickness - eps;
        if (hx <= 0.0 || hy <= 0.0) return false;
        double t0 = 0.0;
        double t1 = 1.0;
        const double dx = lb.x - la.x;
        const double dy = lb.y - la.y;
        // Liang-Barsky against |x| < hx, |y| < hy.
        auto clip = [&](double p, double q) {
            if (p == 0.0) return q > 0.0;
            const double r = q / p;
            if (p < 0.0) {
                if (r > t1) return false;
                t0 = std::max(t0, r);
            } else {
                if (r < t0) return false;
                t1 = std::min(t1, r);
            }
            return true;
        };
        if (!clip(-dx, la.x + hx)) return false;
        if (!clip(dx, hx - la.x)) return false;
        if (!clip(-dy, la.y + hy)) return false;
        if (!clip(dy, hy - la.y)) return false;
        return t1 - t0 > 1e-12;
    }
};

/// Axis-aligned workspace extents.
struct Bounds {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    bool contains(Vec2 p) const { return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y; }
    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
    friend bool operator==(const Bounds&, const Bounds&) = default;
};

} // namespace wsopt
