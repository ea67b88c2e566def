#pragma once

#include "repmix/bayes_factors.hpp"
#include "repmix/summaries.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace repmix {

using Json = nlohmann::ordered_json;

Json to_json(const StudySummary& study);
Json to_json(const TwoComponentNormalMixture& mixture);
Json to_json(const HpdiSet& region);
Json to_json(const DensityGrid& grid);
Json to_json(const BayesFactorReport& report);
Json to_json(const TippingPointResult& result);

/// `level,lo_1,hi_1[,lo_2,hi_2]` (no trailing newline).
std::string hpdi_csv_row(const HpdiSet& region);
/// `theta,density` header plus one line per grid point.
std::string density_grid_csv(const DensityGrid& grid);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double x);

}  // namespace repmix
