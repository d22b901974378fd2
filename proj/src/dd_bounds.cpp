#include "eibounds/dd_bounds.hpp"

#include <algorithm>
#include <string>

namespace eib {

Interval precinct_w_bounds(const Precinct& p) {
    if (p.x >= 1.0) {
        throw validation_error("precinct '" + p.id +
                               "': white-group bounds undefined at x = 1");
    }
    double lo = std::max(0.0, (p.t - p.x) / (1.0 - p.x));
    double hi = std::min(1.0, p.t / (1.0 - p.x));
    return Interval::make(lo, hi);
}

Interval district_dd(const Dataset& ds) {
    double num_lo = 0.0, num_hi = 0.0, den = 0.0;
    for (const Precinct& p : ds.precincts) {
        num_lo += p.n * std::max(0.0, p.t - (1.0 - p.x));
        num_hi += p.n * std::min(p.t, p.x);
        den += p.n * p.x;
    }
    if (!(den > 0.0)) {
        throw validation_error("dataset '" + ds.name +
                               "': sum of n*x must be positive");
    }
    return Interval::make(num_lo / den, num_hi / den);
}

}  // namespace eib
