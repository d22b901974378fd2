#pragma once

#include <algorithm>

namespace eib {

// Closed interval with an explicit empty state. Empty is distinct from a
// degenerate point [a, a].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool empty = false;

    static Interval make(double lo, double hi) {
        if (lo > hi) return none();
        return {lo, hi, false};
    }
    static Interval none() { return {0.0, 0.0, true}; }

    double width() const { return empty ? 0.0 : hi - lo; }

    bool contains(double v) const { return !empty && lo <= v && v <= hi; }

    Interval intersect(const Interval& o) const {
        if (empty || o.empty) return none();
        double a = std::max(lo, o.lo);
        double b = std::min(hi, o.hi);
        if (a > b) return none();
        return make(a, b);
    }
};

}  // namespace eib
