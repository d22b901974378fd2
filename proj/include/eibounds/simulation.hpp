#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "eibounds/data_model.hpp"
#include "eibounds/district_bounds.hpp"

namespace eib {

// Built-in data designs. All produce ground truth.
//   example1 - flat outcome: beta_b = T + tau*(1-x), beta_w = T - tau*x
//   example2 - linear outcome: beta_b = tau*(1-x), beta_w = 1 - tau*x
//   example3 - quadratic outcome: beta_b = 0, beta_w = 1 - x
//   example4 - logistic-normal counts, x ~ U[0, 0.95]
//   example5 - logistic-normal counts, x ~ U[0, 0.7]
//   example6 - quadratic group effects that cancel in t: beta_b = T + b2*(x^2-1),
//              beta_w = T + b2*(x^2+x); observed data indistinguishable from
//              example1 with tau = 0 while the true district rate is T - b2/2
//   custom   - linear group means with bounded uniform residuals and an
//              optional integer population range (exercises varied-n paths)
enum class Design {
    example1,
    example2,
    example3,
    example4,
    example5,
    example6,
    custom
};

// Whether the logistic random effect is multiplied by the white share (1-x)
// or applied unscaled. The two published variants of the logistic-normal
// designs differ on this; both are available.
enum class NoiseScale { white_share, unit };

struct GeneratorSpec {
    Design design = Design::example1;
    int p = 1000;            // number of precincts
    double n = 150;          // population per precinct
    std::uint64_t seed = 0;

    double T = 0.5;    // examples 1 and 6
    double tau = 0.0;  // examples 1 and 2
    double b2 = 0.0;   // example 6

    // Logistic-normal designs (4, 5) and the custom design's linear means:
    // E(beta_b|x) ~ b0 + b1*x, E(beta_w|x) ~ w0 + w1*x on the logit or
    // probability scale respectively.
    double x_lo = 0.0;
    double x_hi = 1.0;
    double s = 0.0;  // random-effect standard deviation
    double b0 = 0.0, b1 = 0.0, w0 = 0.0, w1 = 0.0;
    NoiseScale noise_scale = NoiseScale::white_share;

    // Custom design only.
    double noise = 0.0;  // residual half-width, shrunk near the [0,1] edges
    double n_lo = 0.0, n_hi = 0.0;  // integer population range; 0 = constant n
};

// Presets with the standard parameters for each design.
GeneratorSpec default_spec(Design design);

// Deterministic in the spec (including seed). Counts are made integral by
// rounding n*x with a floor of one, and x is stored as that count over n, so
// the accounting identity holds exactly on generated data.
Dataset generate(const GeneratorSpec& spec);

struct CoverageSummary {
    int reps = 0;
    double mean_dd_width = 0.0;
    struct PerX {
        double x = 0.0;
        double coverage = 0.0;       // fraction of reps with b_true in ci[x]
        double mean_ci_width = 0.0;
        double mean_width_ratio = 0.0;      // mean over reps of |ci|/|DD|
        double width_ratio_of_means = 0.0;  // mean |ci| over mean |DD|
    };
    std::vector<PerX> per_x;

    const PerX& at(double x) const;
};

// Monte-Carlo coverage of the confidence interval over independent datasets
// drawn from the same spec with per-replication derived seeds.
CoverageSummary coverage_experiment(const GeneratorSpec& spec, int reps,
                                    const std::vector<double>& x_grid,
                                    const AnalysisConfig& config);

}  // namespace eib
