#include "eibounds/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eibounds/district_bounds.hpp"
#include "eibounds/rng.hpp"
#include "eibounds/selection_eval.hpp"

namespace eib {

namespace {

double expit(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void require(bool ok, const std::string& msg) {
    if (!ok) throw validation_error(msg);
}

}  // namespace

GeneratorSpec default_spec(Design design) {
    GeneratorSpec s;
    s.design = design;
    switch (design) {
        case Design::example1:
            s.T = 0.5;
            s.tau = 0.2;
            break;
        case Design::example2:
            s.tau = 0.5;
            break;
        case Design::example3:
            break;
        case Design::example4:
            // log(9) intercepts put the noiseless rates at 0.9; the slope
            // log(1/6) drags the black rate toward 0.6 as x grows.
            s.x_hi = 0.95;
            s.s = 0.5;
            s.b0 = 2.1972245773362196;
            s.b1 = -1.791759469228055;
            s.w0 = 2.1972245773362196;
            s.w1 = 0.0;
            s.noise_scale = NoiseScale::white_share;
            break;
        case Design::example5:
            s.x_hi = 0.7;
            s.s = 1.0;
            s.b0 = 0.0;
            s.b1 = 0.0;
            s.w0 = 2.1972245773362196;
            s.w1 = 0.0;
            s.noise_scale = NoiseScale::unit;
            break;
        case Design::example6:
            s.T = 1.0 / 3.0;
            s.b2 = 1.0 / 3.0;
            break;
        case Design::custom:
            s.noise = 0.0;
            s.n_lo = 0;
            s.n_hi = 0;
            break;
    }
    return s;
}

Dataset generate(const GeneratorSpec& spec) {
    require(spec.p >= 1, "precinct count must be at least 1");
    require(spec.x_lo >= 0.0 && spec.x_hi <= 1.0 && spec.x_lo < spec.x_hi,
            "group-share range must satisfy 0 <= x_lo < x_hi <= 1");

    const bool counts = spec.design != Design::custom;
    if (counts) {
        require(spec.n >= 1, "precinct size must be a positive integer");
    }

    switch (spec.design) {
        case Design::example1: {
            require(spec.T > 0.0 && spec.T < 1.0, "T must lie in (0, 1)");
            const double cap = std::min(spec.T, 1.0 - spec.T);
            require(std::abs(spec.tau) <= cap,
                    "tau must satisfy |tau| <= min(T, 1-T) so rates stay in "
                    "[0, 1]");
            break;
        }
        case Design::example2:
            require(spec.tau >= 0.0 && spec.tau <= 1.0,
                    "tau must lie in [0, 1]");
            break;
        case Design::example3:
            break;
        case Design::example4:
        case Design::example5:
            require(spec.s >= 0.0, "noise scale s must be nonnegative");
            break;
        case Design::example6: {
            require(spec.T > 0.0 && spec.T < 1.0, "T must lie in (0, 1)");
            const double lo = std::max(-spec.T / 2.0, -(1.0 - spec.T));
            const double hi = std::min(spec.T, (1.0 - spec.T) / 2.0);
            require(spec.b2 >= lo && spec.b2 <= hi,
                    "b2 pushes a rate outside [0, 1]");
            break;
        }
        case Design::custom: {
            require(spec.noise >= 0.0, "noise must be nonnegative");
            const bool int_n = spec.n_lo > 0 || spec.n_hi > 0;
            if (int_n) {
                require(spec.n_lo >= 1 && spec.n_hi >= spec.n_lo,
                        "integer sizes need 1 <= n_lo <= n_hi");
            } else {
                require(spec.n > 0.0, "precinct size must be positive");
            }
            for (double x : {spec.x_lo, spec.x_hi}) {
                const double mb = spec.b0 + spec.b1 * x;
                const double mw = spec.w0 + spec.w1 * x;
                require(mb >= 0.0 && mb <= 1.0 && mw >= 0.0 && mw <= 1.0,
                        "linear rate means must stay inside [0, 1] over the "
                        "group-share range");
            }
            break;
        }
    }

    Dataset ds;
    ds.name = "synthetic";
    ds.has_ground_truth = true;
    ds.precincts.reserve(static_cast<std::size_t>(spec.p));

    for (int i = 0; i < spec.p; ++i) {
        Rng rng(Rng::derive(spec.seed, static_cast<std::uint64_t>(i)));
        Precinct pr;
        pr.id = "p" + std::to_string(i + 1);

        double x_raw = rng.uniform(spec.x_lo, spec.x_hi);
        double x, n;
        if (counts) {
            const double ni = static_cast<double>(spec.n);
            double k_b = std::clamp(std::round(ni * x_raw), 1.0, ni);
            x = k_b / ni;
            n = ni;
        } else if (spec.n_lo > 0 || spec.n_hi > 0) {
            n = static_cast<double>(
                spec.n_lo +
                static_cast<long long>(rng.next_u64() %
                                       static_cast<std::uint64_t>(
                                           spec.n_hi - spec.n_lo + 1)));
            x = x_raw;
        } else {
            n = spec.n;
            x = x_raw;
        }
        pr.n = n;
        pr.x = x;

        double bb = 0.0, bw = 0.0, t = 0.0;
        switch (spec.design) {
            case Design::example1:
                bb = spec.T + spec.tau * (1.0 - x);
                bw = spec.T - spec.tau * x;
                t = spec.T;
                break;
            case Design::example2:
                bb = spec.tau * (1.0 - x);
                bw = 1.0 - spec.tau * x;
                t = x * bb + (1.0 - x) * bw;
                break;
            case Design::example3:
                bb = 0.0;
                bw = 1.0 - x;
                t = (1.0 - x) * (1.0 - x);
                break;
            case Design::example4:
            case Design::example5: {
                const double f =
                    spec.noise_scale == NoiseScale::white_share ? 1.0 - x : 1.0;
                const double eb = rng.normal(0.0, spec.s);
                const double ew = rng.normal(0.0, spec.s);
                const double qb = expit(spec.b0 + spec.b1 * x + f * eb);
                const double qw = expit(spec.w0 + spec.w1 * x + f * ew);
                const long long k_b =
                    static_cast<long long>(std::llround(n * x));
                const long long k_w = static_cast<long long>(n) - k_b;
                const long long sb = rng.binomial(k_b, qb);
                const long long sw = rng.binomial(k_w, qw);
                bb = static_cast<double>(sb) / static_cast<double>(k_b);
                bw = k_w > 0
                         ? static_cast<double>(sw) / static_cast<double>(k_w)
                         : 0.0;
                t = std::clamp(x * bb + (1.0 - x) * bw, 0.0, 1.0);
                break;
            }
            case Design::example6:
                bb = spec.T + spec.b2 * (x * x - 1.0);
                bw = spec.T + spec.b2 * (x * x + x);
                t = spec.T;
                break;
            case Design::custom: {
                const double mb = spec.b0 + spec.b1 * x;
                const double mw = spec.w0 + spec.w1 * x;
                const double amp_b =
                    std::min({spec.noise, mb, 1.0 - mb});
                const double amp_w =
                    std::min({spec.noise, mw, 1.0 - mw});
                bb = mb + rng.uniform(-amp_b, amp_b);
                bw = mw + rng.uniform(-amp_w, amp_w);
                t = x * bb + (1.0 - x) * bw;
                break;
            }
        }
        pr.beta_b = bb;
        pr.beta_w = bw;
        pr.t = t;
        ds.precincts.push_back(pr);
    }

    validate_dataset(ds);
    return ds;
}

CoverageSummary coverage_experiment(const GeneratorSpec& spec, int reps,
                                    const std::vector<double>& x_grid,
                                    const AnalysisConfig& config) {
    require(reps >= 1, "replication count must be at least 1");
    CoverageSummary summary;
    summary.reps = reps;
    const std::vector<double>& grid =
        x_grid.empty() ? default_x_grid() : x_grid;
    std::vector<std::size_t> hit(grid.size(), 0);
    std::vector<double> ci_w(grid.size(), 0.0);
    std::vector<double> wr(grid.size(), 0.0);
    double dd_w = 0.0;

    AnalysisConfig cfg = config;
    cfg.x_grid = grid;
    for (int rep = 0; rep < reps; ++rep) {
        GeneratorSpec s = spec;
        s.seed = Rng::derive(spec.seed, static_cast<std::uint64_t>(rep));
        Dataset ds = generate(s);
        const double b_true = true_district_b(ds);
        const DistrictAnalysis a = analyze(ds, cfg);
        const double dw = a.dd.width();
        dd_w += dw;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const auto& entry = a.ci.at(grid[k]);
            if (entry && !entry->ci.empty) {
                if (entry->ci.contains(b_true)) ++hit[k];
                ci_w[k] += entry->ci.width();
                wr[k] += dw > 0.0 ? entry->ci.width() / dw : 0.0;
            }
        }
    }

    summary.mean_dd_width = dd_w / reps;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        CoverageSummary::PerX px;
        px.x = grid[k];
        px.coverage = static_cast<double>(hit[k]) / reps;
        px.mean_ci_width = ci_w[k] / reps;
        px.mean_width_ratio = wr[k] / reps;
        px.width_ratio_of_means =
            summary.mean_dd_width > 0.0 ? px.mean_ci_width / summary.mean_dd_width
                                        : 0.0;
        summary.per_x.push_back(px);
    }
    return summary;
}

const CoverageSummary::PerX& CoverageSummary::at(double x) const {
    for (const PerX& px : per_x) {
        if (px.x == x) return px;
    }
    throw validation_error("no coverage entry for x = " + std::to_string(x));
}

}  // namespace eib
