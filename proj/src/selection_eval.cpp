#include "eibounds/selection_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eibounds/district_bounds.hpp"

namespace eib {

const char* to_string(RejectReason r) {
    switch (r) {
        case RejectReason::flipped_bound:
            return "flipped_bound";
        case RejectReason::no_dd_overlap:
            return "no_dd_overlap";
        case RejectReason::wide_dd:
            return "wide_dd";
    }
    return "unknown";
}

SelectionDecision apply_heuristics(const DistrictAnalysis& analysis,
                                   double dd_width_threshold,
                                   bool use_heuristic_2) {
    SelectionDecision d;
    d.dd_width = analysis.dd.width();
    if (analysis.bound_empty) {
        d.reasons.push_back(RejectReason::flipped_bound);
    } else {
        // Overlap is only meaningful when the regression bound itself is a
        // proper interval.
        const Interval rb = Interval::make(analysis.b_hat_l, analysis.b_hat_u);
        if (rb.intersect(analysis.dd).empty) {
            d.reasons.push_back(RejectReason::no_dd_overlap);
        }
    }
    if (use_heuristic_2 && d.dd_width >= dd_width_threshold) {
        d.reasons.push_back(RejectReason::wide_dd);
    }
    d.selected = d.reasons.empty();
    return d;
}

EvaluationRecord evaluate_dataset(const Dataset& ds, const EvalConfig& config) {
    EvaluationRecord rec;
    rec.dataset_name = ds.name;
    rec.b_true = true_district_b(ds);
    const DistrictAnalysis a = analyze(ds, config.analysis);
    rec.decision =
        apply_heuristics(a, config.dd_width_threshold, config.use_heuristic_2);
    const double dd_w = a.dd.width();
    for (const auto& [x, entry] : a.ci) {
        EvaluationRecord::PerX px;
        px.x = x;
        if (entry && !entry->ci.empty) {
            px.captured = entry->ci.contains(rec.b_true);
            px.width_ratio = dd_w > 0.0 ? entry->ci.width() / dd_w : 0.0;
        } else {
            px.captured = false;
            px.width_ratio = 0.0;
        }
        rec.per_x.push_back(px);
    }
    return rec;
}

std::vector<AggregateRow> aggregate_report(
    const std::vector<EvaluationRecord>& records,
    const std::vector<double>& x_grid) {
    std::vector<AggregateRow> rows;
    for (double x : x_grid) {
        AggregateRow row;
        row.x = x;
        row.phi = normal_cdf(x);
        std::size_t selected = 0, captured = 0, with_x = 0;
        double wr_sum = 0.0;
        for (const EvaluationRecord& rec : records) {
            if (!rec.decision.selected) continue;
            ++selected;
            for (const auto& px : rec.per_x) {
                if (px.x == x) {
                    ++with_x;
                    if (px.captured) ++captured;
                    wr_sum += px.width_ratio;
                    break;
                }
            }
        }
        row.selected_fraction =
            records.empty() ? 0.0
                            : static_cast<double>(selected) /
                                  static_cast<double>(records.size());
        if (with_x > 0) {
            row.capture_given_selected =
                static_cast<double>(captured) / static_cast<double>(with_x);
            row.mean_wr_given_selected = wr_sum / static_cast<double>(with_x);
        } else {
            row.capture_given_selected = std::numeric_limits<double>::quiet_NaN();
            row.mean_wr_given_selected = std::numeric_limits<double>::quiet_NaN();
        }
        rows.push_back(row);
    }
    return rows;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace eib
