#include "eibounds/district_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "eibounds/dd_bounds.hpp"

namespace eib {

DistrictWeights district_weights(const Dataset& ds, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw validation_error("lambda must lie in [0, 1], got " +
                               std::to_string(lambda));
    }
    DistrictWeights w;
    w.lambda = lambda;
    const double den = district_denominator(ds);
    double sum_r = 0.0, sum_h0 = 0.0, sum_s1 = 0.0;
    Eigen::Vector3d h = Eigen::Vector3d::Zero();
    for (const Precinct& p : ds.precincts) {
        const double nx = p.n * p.x;
        sum_r += nx * (1.0 - p.x);
        sum_h0 += nx * p.t;
        h += nx * Eigen::Vector3d(1.0 - lambda, 1.0 - lambda * p.x,
                                  p.x - lambda * p.x * p.x);
        const double a = nx * ((1.0 + lambda) / 2.0 - lambda * p.x);
        sum_s1 += a * a;
    }
    w.r = sum_r / den;
    w.h0 = lambda * sum_h0 / den;
    w.h = h / den;
    w.s1 = std::sqrt(sum_s1) / den;
    return w;
}

double point_estimate_b(const Dataset& ds, double lambda, double w1,
                        const Theta& theta) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw validation_error("lambda must lie in [0, 1], got " +
                               std::to_string(lambda));
    }
    const double den = district_denominator(ds);
    double sum = 0.0;
    for (const Precinct& p : ds.precincts) {
        const double mean_t =
            theta(0) + theta(1) * p.x + theta(2) * p.x * p.x;
        const double b_i = (theta(0) + theta(1) + theta(2) * p.x) +
                           lambda * (p.t - mean_t) + w1 * (p.x - 1.0);
        sum += p.n * p.x * b_i;
    }
    return sum / den;
}

RegressionBound regression_bound(const Dataset& ds, double lambda,
                                 const RegressionFit& fit, const W1Bound& w1b) {
    RegressionBound rb;
    // B is decreasing in w1 (slope -r with r > 0 in non-degenerate data), so
    // the upper w1 bound gives the lower district bound and vice versa.
    rb.b_hat_l = point_estimate_b(ds, lambda, w1b.wu, fit.theta);
    rb.b_hat_u = point_estimate_b(ds, lambda, w1b.wl, fit.theta);
    rb.empty = rb.b_hat_l > rb.b_hat_u;
    return rb;
}

CiCore ci_core(const Dataset& ds, double lambda, const RegressionFit& fit,
               const ConstraintSet& cs) {
    const DistrictWeights w = district_weights(ds, lambda);
    CiCore core;
    core.ties.r = w.r;
    core.ties.r_positive = w.r > 0.0;

    // Lower endpoint: the envelope max over the upper-bound constraints of
    // h0 - r*gu0_j + (h - r*gu_j)' theta; upper endpoint symmetric over the
    // lower-bound constraints.
    const std::size_t jn = cs.j_count();
    double best_lo = -std::numeric_limits<double>::infinity();
    double best_hi = std::numeric_limits<double>::infinity();
    double run_lo = -std::numeric_limits<double>::infinity();
    double run_hi = std::numeric_limits<double>::infinity();
    int j_lo = -1, j_hi = -1;
    for (std::size_t j = 0; j < jn; ++j) {
        const Eigen::Vector3d g_lo = w.h - w.r * cs.gu[j];
        const double v_lo = w.h0 - w.r * cs.gu0[j] + g_lo.dot(fit.theta);
        if (v_lo > best_lo) {
            run_lo = best_lo;
            best_lo = v_lo;
            j_lo = static_cast<int>(j);
        } else {
            run_lo = std::max(run_lo, v_lo);
        }
        const Eigen::Vector3d g_hi = w.h - w.r * cs.gl[j];
        const double v_hi = w.h0 - w.r * cs.gl0[j] + g_hi.dot(fit.theta);
        if (v_hi < best_hi) {
            run_hi = best_hi;
            best_hi = v_hi;
            j_hi = static_cast<int>(j);
        } else {
            run_hi = std::min(run_hi, v_hi);
        }
    }
    core.bl = best_lo;
    core.bu = best_hi;
    core.active_lower = j_lo;
    core.active_upper = j_hi;
    core.ties.tie_gap_lower = best_lo - run_lo;
    core.ties.tie_gap_upper = run_hi - best_hi;
    const double env_tol = 1e-9 * (1.0 + std::abs(core.bl) + std::abs(core.bu));
    core.ties.unique_lower = jn < 2 || core.ties.tie_gap_lower > env_tol;
    core.ties.unique_upper = jn < 2 || core.ties.tie_gap_upper > env_tol;

    const Eigen::Vector3d g_l = w.h - w.r * cs.gu[static_cast<std::size_t>(j_lo)];
    const Eigen::Vector3d g_u = w.h - w.r * cs.gl[static_cast<std::size_t>(j_hi)];
    core.sl = w.s1 + std::sqrt(std::max(0.0, g_l.dot(fit.cov * g_l)));
    core.su = w.s1 + std::sqrt(std::max(0.0, g_u.dot(fit.cov * g_u)));

    const W1Bound w1b = w1_bound(fit.theta, cs);
    core.ties.w1_width = w1b.width();
    const double w1_tol = 1e-9 * (1.0 + std::abs(w1b.wl) + std::abs(w1b.wu));
    core.ties.w1_distinct = w1b.wu - w1b.wl > w1_tol;
    return core;
}

CiResult confidence_interval(const Dataset& ds, double lambda,
                             const RegressionFit& fit, const ConstraintSet& cs,
                             double x) {
    if (x < 0.0) {
        throw validation_error("critical multiplier must be nonnegative, got " +
                               std::to_string(x));
    }
    const CiCore core = ci_core(ds, lambda, fit, cs);
    CiResult res;
    res.core = core;
    res.pre_lo = core.bl - x * core.sl;
    res.pre_hi = core.bu + x * core.su;
    const Interval dd = district_dd(ds);
    res.ci = Interval::make(res.pre_lo, res.pre_hi).intersect(dd);
    return res;
}

std::vector<double> default_x_grid() {
    return {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
}

DistrictAnalysis analyze(const Dataset& ds, const AnalysisConfig& config) {
    DistrictAnalysis a;
    a.dataset_name = ds.name;
    a.precincts = ds.size();
    a.config = config;

    double l, u;
    if (config.lu) {
        l = config.lu->first;
        u = config.lu->second;
    } else {
        double mn = std::numeric_limits<double>::infinity();
        double mx = -std::numeric_limits<double>::infinity();
        for (const Precinct& p : ds.precincts) {
            mn = std::min(mn, p.x);
            mx = std::max(mx, p.x);
        }
        l = std::clamp(mn, 1e-6, 1.0 - 1e-6);
        u = std::clamp(mx, 1e-6, 1.0 - 1e-6);
    }
    if (!(l < u)) {
        throw validation_error(
            "dataset '" + ds.name +
            "': group-share range degenerates to a point; pass an explicit "
            "range with distinct endpoints");
    }
    a.l = l;
    a.u = u;

    a.fit = fit_quadratic(ds, config.weights, config.cov);
    a.weights = district_weights(ds, config.lambda);
    a.dd = district_dd(ds);

    const std::vector<double>& grid =
        config.x_grid.empty() ? default_x_grid() : config.x_grid;

    if (config.bounds == BoundSource::binned) {
        a.w1b = w1_bound_binned(ds, a.fit.w0(), config.bins, l, u,
                                config.min_bin_count);
        const RegressionBound rb =
            regression_bound(ds, config.lambda, a.fit, a.w1b);
        a.b_hat_l = rb.b_hat_l;
        a.b_hat_u = rb.b_hat_u;
        a.bound_empty = rb.empty;
        a.ties.r = a.weights.r;
        a.ties.r_positive = a.weights.r > 0.0;
        a.ties.tie_gap_lower = a.w1b.tie_gap_u;
        a.ties.tie_gap_upper = a.w1b.tie_gap_l;
        a.ties.unique_lower = true;
        a.ties.unique_upper = true;
        a.ties.w1_width = a.w1b.width();
        a.ties.w1_distinct = a.w1b.wu - a.w1b.wl >
                             1e-9 * (1.0 + std::abs(a.w1b.wl) + std::abs(a.w1b.wu));
        // The binned route has no covariance machinery for the envelope, so
        // only the plug-in interval (x = 0) is reported.
        for (double x : grid) {
            if (x == 0.0) {
                DistrictAnalysis::CiEntry e;
                e.pre_lo = rb.b_hat_l;
                e.pre_hi = rb.b_hat_u;
                e.ci = rb.empty ? Interval::none()
                                : Interval::make(rb.b_hat_l, rb.b_hat_u)
                                      .intersect(a.dd);
                a.ci[x] = e;
            } else {
                a.ci[x] = std::nullopt;
            }
        }
        return a;
    }

    const ConstraintSet cs = config.bounds == BoundSource::range
                                 ? ConstraintSet::range_endpoints(l, u)
                                 : ConstraintSet::full_range();
    a.w1b = w1_bound(a.fit.theta, cs);
    const RegressionBound rb = regression_bound(ds, config.lambda, a.fit, a.w1b);
    a.b_hat_l = rb.b_hat_l;
    a.b_hat_u = rb.b_hat_u;
    a.bound_empty = rb.empty;

    const CiCore core = ci_core(ds, config.lambda, a.fit, cs);
    a.ties = core.ties;
    a.sl = core.sl;
    a.su = core.su;
    a.active_lower = core.active_lower;
    a.active_upper = core.active_upper;
    for (double x : grid) {
        DistrictAnalysis::CiEntry e;
        e.pre_lo = core.bl - x * core.sl;
        e.pre_hi = core.bu + x * core.su;
        e.ci = Interval::make(e.pre_lo, e.pre_hi).intersect(a.dd);
        a.ci[x] = e;
    }
    return a;
}

}  // namespace eib
