#include "eibounds/data_model.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace eib {

double accounting_tolerance(double n, const ValidationOptions& opts) {
    if (opts.absolute_override) return *opts.absolute_override;
    if (n <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (2.0 * n) + opts.slack_abs;
}

namespace {

void check_range(double v, double lo, double hi, const char* field,
                 std::size_t index, const std::string& id) {
    if (!(std::isfinite(v) && lo <= v && v <= hi)) {
        throw validation_error("precinct " + std::to_string(index + 1) + " (id '" +
                               id + "'): " + field + " = " + std::to_string(v) +
                               " outside [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + "]");
    }
}

}  // namespace

void validate_dataset(const Dataset& ds, const ValidationOptions& opts) {
    double den = 0.0;
    for (std::size_t i = 0; i < ds.precincts.size(); ++i) {
        const Precinct& p = ds.precincts[i];
        if (!(std::isfinite(p.n) && p.n >= 0.0)) {
            throw validation_error("precinct " + std::to_string(i + 1) + " (id '" +
                                   p.id + "'): n = " + std::to_string(p.n) +
                                   " is negative or not finite");
        }
        check_range(p.x, 0.0, 1.0, "x", i, p.id);
        check_range(p.t, 0.0, 1.0, "t", i, p.id);
        if (p.beta_b) check_range(*p.beta_b, 0.0, 1.0, "beta_b", i, p.id);
        if (p.beta_w) check_range(*p.beta_w, 0.0, 1.0, "beta_w", i, p.id);
        if (p.beta_b && p.beta_w && p.n > 0.0) {
            double implied = p.x * *p.beta_b + (1.0 - p.x) * *p.beta_w;
            double tol = accounting_tolerance(p.n, opts);
            if (std::abs(p.t - implied) > tol) {
                throw validation_error(
                    "precinct " + std::to_string(i + 1) + " (id '" + p.id +
                    "'): t = " + std::to_string(p.t) +
                    " violates the accounting identity (expected " +
                    std::to_string(implied) + " within " + std::to_string(tol) + ")");
            }
        }
        den += p.n * p.x;
    }
    if (!(den > 0.0)) {
        throw validation_error("dataset '" + ds.name +
                               "': sum of n*x must be positive");
    }
}

double district_denominator(const Dataset& ds) {
    double den = 0.0;
    for (const Precinct& p : ds.precincts) den += p.n * p.x;
    return den;
}

double true_district_b(const Dataset& ds) {
    if (!ds.has_ground_truth) {
        throw validation_error("dataset '" + ds.name + "': no ground truth");
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ds.precincts.size(); ++i) {
        const Precinct& p = ds.precincts[i];
        if (!p.beta_b) {
            throw validation_error("precinct " + std::to_string(i + 1) +
                                   ": beta_b missing despite ground truth flag");
        }
        num += p.n * p.x * *p.beta_b;
        den += p.n * p.x;
    }
    if (!(den > 0.0)) {
        throw validation_error("dataset '" + ds.name +
                               "': sum of n*x must be positive");
    }
    return num / den;
}

Dataset swap_groups(const Dataset& ds) {
    Dataset out = ds;
    for (Precinct& p : out.precincts) {
        p.x = 1.0 - p.x;
        std::swap(p.beta_b, p.beta_w);
    }
    return out;
}

}  // namespace eib
