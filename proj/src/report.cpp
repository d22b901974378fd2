#include "eibounds/report.hpp"

#include <sstream>

#include "eibounds/csv.hpp"
#include "eibounds/district_bounds.hpp"

namespace eib {

namespace {

const char* source_name(BoundSource s) {
    switch (s) {
        case BoundSource::range:
            return "range";
        case BoundSource::full:
            return "full";
        case BoundSource::binned:
            return "binned";
    }
    return "unknown";
}

}  // namespace

nlohmann::json analysis_report(const DistrictAnalysis& a) {
    nlohmann::json j;
    j["dataset"] = a.dataset_name;
    j["precincts"] = a.precincts;
    j["dd"] = {a.dd.lo, a.dd.hi};
    j["w1"] = {a.w1b.wl, a.w1b.wu};
    j["b_hat_l"] = a.b_hat_l;
    j["b_hat_u"] = a.b_hat_u;
    j["bound_empty"] = a.bound_empty;
    j["r"] = a.weights.r;
    j["s1"] = a.weights.s1;
    if (a.sl) j["sl"] = *a.sl;
    if (a.su) j["su"] = *a.su;
    if (a.active_lower) j["active_lower"] = *a.active_lower;
    if (a.active_upper) j["active_upper"] = *a.active_upper;

    nlohmann::json ci = nlohmann::json::object();
    nlohmann::json ci_pre = nlohmann::json::object();
    nlohmann::json ci_status = nlohmann::json::object();
    for (const auto& [x, entry] : a.ci) {
        const std::string key = format_double(x);
        if (!entry) {
            ci[key] = nullptr;
            ci_status[key] = "unavailable";
            continue;
        }
        ci_pre[key] = {entry->pre_lo, entry->pre_hi};
        if (entry->ci.empty) {
            ci[key] = nullptr;
            ci_status[key] = "empty";
        } else {
            ci[key] = {entry->ci.lo, entry->ci.hi};
            ci_status[key] = "ok";
        }
    }
    j["ci"] = ci;
    j["ci_pre"] = ci_pre;
    j["ci_status"] = ci_status;

    j["ties"] = {{"r", a.ties.r},
                 {"r_positive", a.ties.r_positive},
                 {"tie_gap_lower", a.ties.tie_gap_lower},
                 {"tie_gap_upper", a.ties.tie_gap_upper},
                 {"unique_lower", a.ties.unique_lower},
                 {"unique_upper", a.ties.unique_upper},
                 {"w1_width", a.ties.w1_width},
                 {"w1_distinct", a.ties.w1_distinct},
                 {"all_pass", a.ties.all_pass()}};

    nlohmann::json params;
    params["lambda"] = a.config.lambda;
    params["prop"] = source_name(a.config.bounds);
    params["l"] = a.l;
    params["u"] = a.u;
    params["weights"] =
        a.config.weights == WeightKind::population ? "population" : "unit";
    params["cov"] = a.config.cov == CovKind::hc0 ? "hc0" : "hc1";
    if (a.config.bounds == BoundSource::binned) {
        params["bins"] = a.config.bins;
        params["min_bin_count"] = a.config.min_bin_count;
    }
    j["params"] = params;
    return j;
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
    std::ostringstream out;
    out << "x,phi,capture_given_selected,mean_wr_given_selected,"
           "selected_fraction\n";
    for (const AggregateRow& r : rows) {
        out << format_double(r.x) << ',' << format_double(r.phi) << ','
            << format_double(r.capture_given_selected) << ','
            << format_double(r.mean_wr_given_selected) << ','
            << format_double(r.selected_fraction) << '\n';
    }
    return out.str();
}

nlohmann::json evaluation_report(const std::vector<EvaluationRecord>& records,
                                 const std::vector<AggregateRow>& rows,
                                 const EvalConfig& config) {
    nlohmann::json j;
    j["datasets"] = records.size();
    j["dd_width_threshold"] = config.dd_width_threshold;
    j["heuristic_2"] = config.use_heuristic_2;

    nlohmann::json params;
    params["lambda"] = config.analysis.lambda;
    params["prop"] = source_name(config.analysis.bounds);
    if (config.analysis.lu) {
        params["l"] = config.analysis.lu->first;
        params["u"] = config.analysis.lu->second;
    } else {
        params["lu"] = "auto";
    }
    params["weights"] = config.analysis.weights == WeightKind::population
                            ? "population"
                            : "unit";
    params["cov"] = config.analysis.cov == CovKind::hc0 ? "hc0" : "hc1";
    params["x_grid"] = config.analysis.x_grid.empty() ? default_x_grid()
                                                      : config.analysis.x_grid;
    if (config.analysis.bounds == BoundSource::binned) {
        params["bins"] = config.analysis.bins;
        params["min_bin_count"] = config.analysis.min_bin_count;
    }
    j["params"] = params;

    nlohmann::json recs = nlohmann::json::array();
    for (const EvaluationRecord& rec : records) {
        nlohmann::json r;
        r["dataset"] = rec.dataset_name;
        r["b_true"] = rec.b_true;
        r["selected"] = rec.decision.selected;
        nlohmann::json reasons = nlohmann::json::array();
        for (RejectReason reason : rec.decision.reasons) {
            reasons.push_back(to_string(reason));
        }
        r["reject_reasons"] = reasons;
        r["dd_width"] = rec.decision.dd_width;
        nlohmann::json per_x = nlohmann::json::object();
        for (const auto& px : rec.per_x) {
            per_x[format_double(px.x)] = {{"captured", px.captured},
                                          {"width_ratio", px.width_ratio}};
        }
        r["per_x"] = per_x;
        recs.push_back(r);
    }
    j["records"] = recs;

    nlohmann::json agg = nlohmann::json::array();
    for (const AggregateRow& r : rows) {
        agg.push_back({{"x", r.x},
                       {"phi", r.phi},
                       {"capture_given_selected", r.capture_given_selected},
                       {"mean_wr_given_selected", r.mean_wr_given_selected},
                       {"selected_fraction", r.selected_fraction}});
    }
    j["aggregate"] = agg;
    return j;
}

}  // namespace eib
