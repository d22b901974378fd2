#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "eibounds/district_bounds.hpp"
#include "eibounds/selection_eval.hpp"

namespace eib {

// Full analysis report: bounds, interval per x (null when empty or not
// computable), diagnostics, and the effective configuration, so a run is
// replayable from its own output.
nlohmann::json analysis_report(const DistrictAnalysis& a);

std::string aggregate_csv(const std::vector<AggregateRow>& rows);

nlohmann::json evaluation_report(const std::vector<EvaluationRecord>& records,
                                 const std::vector<AggregateRow>& rows,
                                 const EvalConfig& config);

}  // namespace eib
