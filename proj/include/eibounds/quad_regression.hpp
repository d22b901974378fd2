#pragma once

#include <Eigen/Dense>

#include "eibounds/data_model.hpp"

namespace eib {

// Coefficients of E(t|x) = w0 + c1*x + d1*x^2 in that order.
using Theta = Eigen::Vector3d;

enum class WeightKind { unit, population };
enum class CovKind { hc1, hc0 };

struct RegressionFit {
    Theta theta = Theta::Zero();
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();  // robust sandwich for theta
    std::vector<double> residuals;  // t - fitted, one per precinct in order
    double cond = 0.0;      // condition number of the normal matrix
    std::size_t rows = 0;   // precincts with positive weight
    WeightKind weights = WeightKind::unit;
    CovKind cov_kind = CovKind::hc1;

    double w0() const { return theta(0); }
    double c1() const { return theta(1); }
    double d1() const { return theta(2); }
};

// Weighted least squares of t on (1, x, x^2) via QR, with a
// heteroscedasticity-robust covariance. hc1 applies the m/(m-3) small-sample
// factor, hc0 omits it. Rejects designs with fewer than 3 distinct x values
// or a normal-matrix condition number above 1e12.
RegressionFit fit_quadratic(const Dataset& ds,
                            WeightKind weights = WeightKind::unit,
                            CovKind cov = CovKind::hc1);

}  // namespace eib
