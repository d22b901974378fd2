#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eibounds/errors.hpp"

namespace eib {

// One geographic unit. x is the black population share, t the observed
// outcome share, and the optional betas are the group-specific rates that
// aggregate data normally hides (present in simulated or labeled data).
struct Precinct {
    std::string id;
    double n = 0.0;  // population; nonnegative, need not be an integer
    double x = 0.0;  // in [0,1]
    double t = 0.0;  // in [0,1]
    std::optional<double> beta_b;
    std::optional<double> beta_w;
};

struct Dataset {
    std::vector<Precinct> precincts;
    std::string name;
    bool has_ground_truth = false;

    std::size_t size() const { return precincts.size(); }
};

struct ValidationOptions {
    // Accounting slack on top of the 1/(2n) term that absorbs count rounding
    // in data built from integer tallies.
    double slack_abs = 1e-9;
    // Replaces the whole per-precinct bound when set.
    std::optional<double> absolute_override;
};

// |t - (x*beta_b + (1-x)*beta_w)| must stay within this for n > 0.
double accounting_tolerance(double n, const ValidationOptions& opts = {});

// Field ranges, the accounting identity where ground truth is present, and
// a positive n*x total. Throws validation_error naming the offending row.
void validate_dataset(const Dataset& ds, const ValidationOptions& opts = {});

// Sum of n_i * x_i, the weighting denominator shared by district formulas.
double district_denominator(const Dataset& ds);

// Population-weighted district rate for the black group,
// sum(n*x*beta_b) / sum(n*x). Requires ground truth.
double true_district_b(const Dataset& ds);

// x <-> 1-x with the group roles swapped; t is unchanged because the
// accounting identity is symmetric in the two groups. Running the standard
// analysis on the swapped data yields the white-group district rate.
Dataset swap_groups(const Dataset& ds);

}  // namespace eib
