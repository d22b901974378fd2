#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eibounds/data_model.hpp"
#include "eibounds/dd_bounds.hpp"
#include "eibounds/interval.hpp"
#include "eibounds/quad_regression.hpp"
#include "eibounds/w1_bounds.hpp"

namespace eib {

// Weighting quantities shared by the district estimate and its interval.
// With den = sum n*x:
//   r  = sum n*x*(1-x) / den          (sensitivity of B to w1, negated)
//   h0 = lambda * sum n*x*t / den
//   h  = sum n*x*(1-lambda, 1-lambda*x, x-lambda*x^2) / den
//   s1 = sqrt( sum (n*x*((1+lambda)/2 - lambda*x) / den)^2 )
struct DistrictWeights {
    double lambda = 1.0;
    double r = 0.0;
    double h0 = 0.0;
    Eigen::Vector3d h = Eigen::Vector3d::Zero();
    double s1 = 0.0;
};

DistrictWeights district_weights(const Dataset& ds, double lambda);

// District estimate B(lambda, w1, theta): the n*x-weighted mean of
//   b_i = (w0 + c1 + d1*x) + lambda*(t - w0 - c1*x - d1*x^2) + w1*(x - 1).
// Linear in w1 with slope -r.
double point_estimate_b(const Dataset& ds, double lambda, double w1,
                        const Theta& theta);

struct RegressionBound {
    double b_hat_l = 0.0;  // B at wu (B decreases in w1)
    double b_hat_u = 0.0;  // B at wl
    bool empty = false;    // inherited from a flipped w1 bound
};

RegressionBound regression_bound(const Dataset& ds, double lambda,
                                 const RegressionFit& fit, const W1Bound& w1b);

// Diagnostics for the interval's regularity conditions: r must be positive,
// the envelope argmax/argmin should be unique, and the w1 bound should have
// positive width. Violations do not block computation; they are reported.
struct TieDiagnostics {
    double r = 0.0;
    bool r_positive = false;
    double tie_gap_lower = 0.0;  // envelope margin at the lower-endpoint index
    double tie_gap_upper = 0.0;
    bool unique_lower = false;
    bool unique_upper = false;
    double w1_width = 0.0;
    bool w1_distinct = false;

    bool all_pass() const {
        return r_positive && unique_lower && unique_upper && w1_distinct;
    }
};

// x-independent core of the confidence interval. The endpoint envelopes
//   BL = max_j (h0 - r*gu0_j + (h - r*gu_j) . theta)   (argmax jhat)
//   BU = min_j (h0 - r*gl0_j + (h - r*gl_j) . theta)   (argmin jtilde)
// equal the regression bound, and the endpoint scales are
//   sl = s1 + sqrt(g' V g) at g = h - r*gu_jhat, su likewise at jtilde.
struct CiCore {
    double bl = 0.0;
    double bu = 0.0;
    double sl = 0.0;
    double su = 0.0;
    int active_lower = -1;
    int active_upper = -1;
    TieDiagnostics ties;
};

CiCore ci_core(const Dataset& ds, double lambda, const RegressionFit& fit,
               const ConstraintSet& cs);

struct CiResult {
    double pre_lo = 0.0;  // BL - x*sl, before intersecting
    double pre_hi = 0.0;  // BU + x*su
    Interval ci;          // [pre_lo, pre_hi] intersected with the DD bound;
                          // empty when they do not meet (never clamped)
    CiCore core;
};

CiResult confidence_interval(const Dataset& ds, double lambda,
                             const RegressionFit& fit, const ConstraintSet& cs,
                             double x);

std::vector<double> default_x_grid();  // 0 to 2 in steps of 0.25

struct AnalysisConfig {
    double lambda = 1.0;
    BoundSource bounds = BoundSource::range;
    // Explicit (l, u); unset means min/max of the data's x, clipped into
    // (1e-6, 1-1e-6) so the range constraints stay finite.
    std::optional<std::pair<double, double>> lu;
    WeightKind weights = WeightKind::unit;
    CovKind cov = CovKind::hc1;
    std::vector<double> x_grid = default_x_grid();
    int bins = 10;            // binned route only
    int min_bin_count = 20;   // binned route only
};

// Everything the reports and the selection heuristics consume.
struct DistrictAnalysis {
    std::string dataset_name;
    std::size_t precincts = 0;
    AnalysisConfig config;  // effective values after defaults
    double l = 0.0, u = 0.0;
    RegressionFit fit;
    W1Bound w1b;
    DistrictWeights weights;
    Interval dd;
    double b_hat_l = 0.0;
    double b_hat_u = 0.0;
    bool bound_empty = false;
    TieDiagnostics ties;
    // Unavailable on the binned route, which has no constraint vectors.
    std::optional<double> sl, su;
    std::optional<int> active_lower, active_upper;

    struct CiEntry {
        double pre_lo = 0.0;
        double pre_hi = 0.0;
        Interval ci;
    };
    // Keyed by x. nullopt: not computable (binned route at x > 0).
    std::map<double, std::optional<CiEntry>> ci;
};

DistrictAnalysis analyze(const Dataset& ds, const AnalysisConfig& config = {});

}  // namespace eib
