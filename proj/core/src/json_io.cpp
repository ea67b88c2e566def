#include "repmix/json_io.hpp"

#include <charconv>
#include <cmath>

namespace repmix {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

Json to_json(const StudySummary& study) {
    Json j{{"label", study.label()}, {"estimate", study.estimate()}, {"std_error", study.std_error()}};
    if (study.scale()) j["scale"] = *study.scale();
    return j;
}

Json to_json(const TwoComponentNormalMixture& mixture) {
    return Json{{"weight_informative", mixture.weight_informative()},
                {"mean_informative", mixture.mean_informative()},
                {"var_informative", mixture.var_informative()},
                {"mean_vague", mixture.mean_vague()},
                {"var_vague", mixture.var_vague()}};
}

Json to_json(const HpdiSet& region) {
    Json intervals = Json::array();
    for (const auto& iv : region.intervals) intervals.push_back(Json::array({iv.lo, iv.hi}));
    return Json{{"level", region.level},
                {"intervals", std::move(intervals)},
                {"attained_mass", region.attained_mass},
                {"density_cut", region.density_cut},
                {"forced_hull", region.forced_hull}};
}

Json to_json(const DensityGrid& grid) {
    Json meta = Json::object();
    for (const auto& [key, value] : grid.metadata) meta[key] = value;
    Json theta = Json::array();
    Json density = Json::array();
    for (const auto& [x, d] : grid.points) {
        theta.push_back(x);
        density.push_back(d);
    }
    return Json{{"metadata", std::move(meta)}, {"theta", std::move(theta)}, {"density", std::move(density)}};
}

Json to_json(const BayesFactorReport& report) {
    // JSON has no infinities; an overflowed value is carried by log_value alone.
    Json value = std::isfinite(report.value) ? Json(report.value) : Json(nullptr);
    return Json{{"value", std::move(value)},
                {"log_value", report.log_value},
                {"formatted", report.formatted},
                {"orientation", report.orientation()},
                {"jeffreys_label", report.jeffreys_label()}};
}

Json to_json(const TippingPointResult& result) {
    Json trace = Json::array();
    for (const auto& point : result.trace) {
        trace.push_back(Json{{"omega", point.omega},
                             {"median", point.median},
                             {"hpdi", to_json(point.region)},
                             {"excludes_threshold", point.excludes_threshold}});
    }
    return Json{{"omega_star", result.omega_star ? Json(*result.omega_star) : Json(nullptr)},
                {"regime", to_string(result.regime)},
                {"crossings", result.crossings},
                {"monotone", result.monotone},
                {"trace", std::move(trace)}};
}

std::string hpdi_csv_row(const HpdiSet& region) {
    std::string row = format_number(region.level);
    for (const auto& iv : region.intervals) row += "," + format_number(iv.lo) + "," + format_number(iv.hi);
    return row;
}

std::string density_grid_csv(const DensityGrid& grid) {
    std::string out = "theta,density\n";
    for (const auto& [x, d] : grid.points) out += format_number(x) + "," + format_number(d) + "\n";
    return out;
}

}  // namespace repmix
