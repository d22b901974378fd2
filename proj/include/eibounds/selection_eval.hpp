#pragma once

#include <string>
#include <vector>

#include "eibounds/district_bounds.hpp"

namespace eib {

enum class RejectReason { flipped_bound, no_dd_overlap, wide_dd };

const char* to_string(RejectReason r);

// Screening applicable without ground truth: reject flipped bounds, bounds
// that miss the DD interval entirely, and (optionally) datasets whose DD
// interval is too wide to have retained much information.
struct SelectionDecision {
    bool selected = false;
    std::vector<RejectReason> reasons;  // empty iff selected
    double dd_width = 0.0;
};

SelectionDecision apply_heuristics(const DistrictAnalysis& analysis,
                                   double dd_width_threshold = 0.7,
                                   bool use_heuristic_2 = false);

struct EvalConfig {
    AnalysisConfig analysis;
    double dd_width_threshold = 0.7;
    bool use_heuristic_2 = false;
};

struct EvaluationRecord {
    std::string dataset_name;
    double b_true = 0.0;
    SelectionDecision decision;
    struct PerX {
        double x = 0.0;
        bool captured = false;     // b_true inside ci[x]; false when empty
        double width_ratio = 0.0;  // |ci[x]| / |DD|; 0 when empty
    };
    std::vector<PerX> per_x;  // follows the config's x grid
};

// Requires ground truth. Runs the full analysis and scores each x.
EvaluationRecord evaluate_dataset(const Dataset& ds, const EvalConfig& config);

struct AggregateRow {
    double x = 0.0;
    double phi = 0.0;  // nominal confidence level for this x
    double capture_given_selected = 0.0;  // NaN when nothing selected
    double mean_wr_given_selected = 0.0;  // NaN when nothing selected
    double selected_fraction = 0.0;
};

std::vector<AggregateRow> aggregate_report(
    const std::vector<EvaluationRecord>& records,
    const std::vector<double>& x_grid);

// Standard normal CDF, absolute error below 1e-10.
double normal_cdf(double x);

}  // namespace eib
