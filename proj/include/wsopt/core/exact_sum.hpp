#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace wsopt {

/// Order-independent floating point accumulator. Keeps a list of
/// non-overlapping partials (Shewchuk) and rounds the exact sum once at the
/// end, so any permutation of the same terms yields the same double.
class ExactSum {
public:
    void add(double x) {
        if (!std::isfinite(x)) {
            special_ += x;
            return;
        }
        std::size_t i = 0;
        for (double y : partials_) {
            if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
            const double hi = x + y;
            const double lo = y - (hi - x);
            if (lo != 0.0) partials_[i++] = lo;
            x = hi;
        }
        partials_.resize(i);
        partials_.push_back(x);
    }

    /// Adds a*b exactly (the rounding error of the product is kept).
    void add_product(double a, double b) {
        const double p = a * b;
        if (!std::isfinite(p)) {
            add(p);
            return;
        }
        add(p);
        add(std::fma(a, b, -p));
    }

    /// Adds w*x exactly for any 64-bit integer weight.
    void add_weighted(std::uint64_t w, double x) {
        const auto hi = static_cast<double>(w >> 32) * 4294967296.0;
        const auto lo = static_cast<double>(w & 0xffffffffULL);
        if (hi != 0.0) add_product(hi, x);
        if (lo != 0.0) add_product(lo, x);
    }

    double value() const {
        if (special_ != 0.0 || std::isnan(special_)) return special_;
        std::size_t n = partials_.size();
        if (n == 0) return 0.0;
        double hi = partials_[--n];
        double lo = 0.0;
        while (n > 0) {
            const double x = hi;
            const double y = partials_[--n];
            hi = x + y;
            const double yr = hi - x;
            lo = y - yr;
            if (lo != 0.0) break;
        }
        // Half-way case: round toward the side the remaining partials point to.
        if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
            const double y = lo * 2.0;
            const double x = hi + y;
            const double yr = x - hi;
            if (y == yr) hi = x;
        }
        return hi;
    }

private:
    std::vector<double> partials_;
    double special_ = 0.0;
};

} // namespace wsopt
