#pragma once

#include "eibounds/data_model.hpp"
#include "eibounds/interval.hpp"

namespace eib {

// Assumption-free bounds for one precinct's white-group rate, derived from
// the accounting identity alone: [max{0,(t-x)/(1-x)}, min{1, t/(1-x)}].
// Requires x < 1.
Interval precinct_w_bounds(const Precinct& p);

// Assumption-free bounds for the district black-group rate:
// [sum n*max{0, t-(1-x)}, sum n*min{t, x}] / sum n*x.
Interval district_dd(const Dataset& ds);

}  // namespace eib
