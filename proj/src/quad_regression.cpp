#include "eibounds/quad_regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace eib {

RegressionFit fit_quadratic(const Dataset& ds, WeightKind weights, CovKind cov) {
    std::vector<double> xs, ts, rho;
    xs.reserve(ds.size());
    for (const Precinct& p : ds.precincts) {
        double w = weights == WeightKind::population ? p.n : 1.0;
        if (w <= 0.0) continue;
        xs.push_back(p.x);
        ts.push_back(p.t);
        rho.push_back(w);
    }
    const std::size_t m = xs.size();

    std::vector<double> distinct(xs);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3) {
        throw validation_error("dataset '" + ds.name + "': quadratic fit needs at least 3 distinct x values, got " +
                               std::to_string(distinct.size()));
    }

    Eigen::MatrixXd z(m, 3);
    Eigen::VectorXd y(m), w(m);
    for (std::size_t i = 0; i < m; ++i) {
        z(i, 0) = 1.0;
        z(i, 1) = xs[i];
        z(i, 2) = xs[i] * xs[i];
        y(i) = ts[i];
        w(i) = rho[i];
    }

    Eigen::Matrix3d a = z.transpose() * w.asDiagonal() * z;
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(a);
    double smin = svd.singularValues()(2);
    double cond = smin > 0.0 ? svd.singularValues()(0) / smin
                             : std::numeric_limits<double>::infinity();
    if (!(cond <= 1e12)) {
        throw validation_error("dataset '" + ds.name +
                               "': quadratic design is ill conditioned (condition number " +
                               std::to_string(cond) + "); x values are too close to collinear");
    }

    Eigen::VectorXd sw = w.array().sqrt();
    Eigen::MatrixXd zw = sw.asDiagonal() * z;
    Eigen::VectorXd yw = sw.asDiagonal() * y;
    RegressionFit fit;
    fit.theta = zw.colPivHouseholderQr().solve(yw);
    fit.cond = cond;
    fit.rows = m;
    fit.weights = weights;
    fit.cov_kind = cov;

    Eigen::VectorXd resid = y - z * fit.theta;
    Eigen::Matrix3d meat = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < m; ++i) {
        Eigen::Vector3d zi = z.row(i);
        double s = w(i) * resid(i);
        meat += (s * s) * zi * zi.transpose();
    }
    Eigen::Matrix3d ainv = a.ldlt().solve(Eigen::Matrix3d::Identity());
    fit.cov = ainv * meat * ainv;
    if (cov == CovKind::hc1 && m > 3) {
        fit.cov *= static_cast<double>(m) / static_cast<double>(m - 3);
    }
    fit.residuals.reserve(ds.size());
    for (const Precinct& p : ds.precincts) {
        fit.residuals.push_back(p.t - fit.theta(0) - fit.theta(1) * p.x -
                                fit.theta(2) * p.x * p.x);
    }
    return fit;
}

}  // namespace eib
