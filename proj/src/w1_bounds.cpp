#include "eibounds/w1_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "eibounds/dd_bounds.hpp"

namespace eib {

ConstraintSet ConstraintSet::range_endpoints(double l, double u) {
    if (!(0.0 < l && l < u && u < 1.0)) {
        throw validation_error("range endpoints need 0 < l < u < 1, got l = " +
                               std::to_string(l) + ", u = " + std::to_string(u));
    }
    ConstraintSet cs;
    cs.source = BoundSource::range;
    cs.l = l;
    cs.u = u;
    const double il = 1.0 / l, iu = 1.0 / u;
    const double cl = 1.0 / (1.0 - l), cu = 1.0 / (1.0 - u);
    // Lower envelope: the white-group rate must stay above its floor at both
    // endpoints, which yields -w0/e and (w0+c1+d1-1)/(1-e) - d1 at e in {l,u}.
    cs.gl0 = {0.0, -cl, 0.0, -cu};
    cs.gl = {Eigen::Vector3d(-il, 0.0, 0.0), Eigen::Vector3d(cl, cl, cl - 1.0),
             Eigen::Vector3d(-iu, 0.0, 0.0), Eigen::Vector3d(cu, cu, cu - 1.0)};
    // Upper envelope: (1-w0)/e and (w0+c1+d1)/(1-e) - d1.
    cs.gu0 = {il, 0.0, iu, 0.0};
    cs.gu = {Eigen::Vector3d(-il, 0.0, 0.0), Eigen::Vector3d(cl, cl, cl - 1.0),
             Eigen::Vector3d(-iu, 0.0, 0.0), Eigen::Vector3d(cu, cu, cu - 1.0)};
    return cs;
}

ConstraintSet ConstraintSet::full_range() {
    ConstraintSet cs;
    cs.source = BoundSource::full;
    // Limit of the endpoint constraints as l -> 0, u -> 1:
    // wl = max{-w0, c1 + w0 - 1}, wu = min{1 - w0, c1 + w0}.
    cs.gl0 = {0.0, -1.0};
    cs.gl = {Eigen::Vector3d(-1.0, 0.0, 0.0), Eigen::Vector3d(1.0, 1.0, 0.0)};
    cs.gu0 = {1.0, 0.0};
    cs.gu = {Eigen::Vector3d(-1.0, 0.0, 0.0), Eigen::Vector3d(1.0, 1.0, 0.0)};
    return cs;
}

namespace {

struct EnvelopeEnd {
    double value;
    int index;
    double gap;  // margin to the runner-up
};

// best = max (sign +1) or min (sign -1) of the J entries, lowest index on
// exact ties, with the runner-up margin for tie diagnostics.
EnvelopeEnd envelope(const std::vector<double>& g0,
                     const std::vector<Eigen::Vector3d>& g, const Theta& theta,
                     int sign) {
    EnvelopeEnd out{0.0, -1, std::numeric_limits<double>::infinity()};
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < g0.size(); ++j) {
        double v = sign * (g0[j] + g[j].dot(theta));
        if (v > best) {
            out.gap = v - best;
            best = v;
            out.index = static_cast<int>(j);
        } else {
            out.gap = std::min(out.gap, best - v);
        }
    }
    out.value = sign * best;
    if (g0.size() < 2) out.gap = std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace

W1Bound w1_bound(const Theta& theta, const ConstraintSet& cs) {
    W1Bound b;
    EnvelopeEnd lo = envelope(cs.gl0, cs.gl, theta, +1);
    EnvelopeEnd hi = envelope(cs.gu0, cs.gu, theta, -1);
    b.wl = lo.value;
    b.wu = hi.value;
    b.active_l = lo.index;
    b.active_u = hi.index;
    b.tie_gap_l = lo.gap;
    b.tie_gap_u = hi.gap;
    b.empty = b.wl > b.wu;
    return b;
}

W1Bound w1_bound_binned(const Dataset& ds, double w0_hat, int bins, double l,
                        double u, int min_bin_count) {
    if (bins < 1) {
        throw validation_error("bin count must be at least 1, got " +
                               std::to_string(bins));
    }
    if (!(0.0 < l && l < u && u < 1.0)) {
        throw validation_error("binned domain needs 0 < l < u < 1, got l = " +
                               std::to_string(l) + ", u = " + std::to_string(u));
    }
    struct Point {
        double x, lo, hi;
    };
    std::vector<Point> pts;
    for (const Precinct& p : ds.precincts) {
        if (p.x < l || p.x > u || p.x >= 1.0) continue;
        Interval wb = precinct_w_bounds(p);
        pts.push_back({p.x, wb.lo, wb.hi});
    }
    if (pts.empty()) {
        throw validation_error("dataset '" + ds.name +
                               "': no precincts inside the domain [" +
                               std::to_string(l) + ", " + std::to_string(u) + "]");
    }
    std::sort(pts.begin(), pts.end(),
              [](const Point& a, const Point& b) { return a.x < b.x; });
    const std::size_t m = pts.size();
    if (m < static_cast<std::size_t>(bins) * static_cast<std::size_t>(min_bin_count)) {
        throw validation_error(
            "dataset '" + ds.name + "': " + std::to_string(m) +
            " precincts cannot fill " + std::to_string(bins) +
            " bins of at least " + std::to_string(min_bin_count) + " each");
    }

    W1Bound b;
    b.wl = -std::numeric_limits<double>::infinity();
    b.wu = std::numeric_limits<double>::infinity();
    double runner_l = -std::numeric_limits<double>::infinity();
    double runner_u = std::numeric_limits<double>::infinity();
    for (int k = 0; k < bins; ++k) {
        std::size_t begin = m * static_cast<std::size_t>(k) / bins;
        std::size_t end = m * (static_cast<std::size_t>(k) + 1) / bins;
        double sx = 0.0, slo = 0.0, shi = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            sx += pts[i].x;
            slo += pts[i].lo;
            shi += pts[i].hi;
        }
        double cnt = static_cast<double>(end - begin);
        double xbar = sx / cnt;
        double cand_l = (slo / cnt - w0_hat) / xbar;
        double cand_u = (shi / cnt - w0_hat) / xbar;
        if (cand_l > b.wl) {
            runner_l = b.wl;
            b.wl = cand_l;
            b.active_l = k;
        } else {
            runner_l = std::max(runner_l, cand_l);
        }
        if (cand_u < b.wu) {
            runner_u = b.wu;
            b.wu = cand_u;
            b.active_u = k;
        } else {
            runner_u = std::min(runner_u, cand_u);
        }
    }
    b.tie_gap_l = b.wl - runner_l;
    b.tie_gap_u = runner_u - b.wu;
    b.empty = b.wl > b.wu;
    b.degenerate = bins == 1;
    return b;
}

}  // namespace eib
