#pragma once

#include <vector>

#include <Eigen/Dense>

#include "eibounds/data_model.hpp"
#include "eibounds/quad_regression.hpp"

namespace eib {

// How the slope's identification interval is obtained:
//   range  - from the envelope constraints at the observed x-range endpoints
//            l and u (the default; tightest of the three),
//   full   - the limit l -> 0, u -> 1, valid with no range information,
//   binned - nonparametric, from binned means of the precinct-level bounds.
enum class BoundSource { range, full, binned };

// The identification interval for the contextual slope w1 is the envelope of
// J affine functions of theta:
//   wl(theta) = max_j (gl0_j + gl_j . theta)
//   wu(theta) = min_j (gu0_j + gu_j . theta)
// The vectors are also the inputs to the district confidence interval.
struct ConstraintSet {
    BoundSource source = BoundSource::full;
    double l = 0.0, u = 0.0;  // meaningful when source == range
    std::vector<double> gl0, gu0;
    std::vector<Eigen::Vector3d> gl, gu;

    int j_count() const { return static_cast<int>(gl0.size()); }

    // Envelope constraints evaluated at both endpoints of (l, u); J = 4.
    // Requires 0 < l < u < 1.
    static ConstraintSet range_endpoints(double l, double u);

    // Constraints for the full domain; J = 2.
    static ConstraintSet full_range();
};

struct W1Bound {
    double wl = 0.0;
    double wu = 0.0;
    int active_l = -1;  // constraint (or bin) index attaining wl
    int active_u = -1;  // likewise for wu
    double tie_gap_l = 0.0;  // margin to the runner-up entry
    double tie_gap_u = 0.0;
    bool empty = false;       // wl > wu, possible when assumptions fail
    bool degenerate = false;  // single-bin nonparametric estimate

    double width() const { return wu - wl; }
};

W1Bound w1_bound(const Theta& theta, const ConstraintSet& cs);

// Nonparametric route: equal-count bins over x in [l, u], bin means of the
// precinct-level white-rate bounds, then
//   wl = max over bins of (mean L - w0_hat) / mean x
//   wu = min over bins of (mean U - w0_hat) / mean x.
// Every bin must hold at least min_bin_count precincts. bins == 1 yields a
// very wide interval and sets the degenerate flag.
W1Bound w1_bound_binned(const Dataset& ds, double w0_hat, int bins, double l,
                        double u, int min_bin_count = 20);

}  // namespace eib
