#include "repmix/bayes_factors.hpp"

#include "repmix/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace repmix {

namespace {

std::string fixed(double x, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    std::string s(buf);
    if (decimals > 0 && s.size() > 2 && s.compare(s.size() - 2, 2, ".0") == 0) s.resize(s.size() - 2);
    return s;
}

// Rounds half away from zero at `decimals` places, then prints.
std::string rounded(double x, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return fixed(std::round(x * scale) / scale, decimals);
}

std::string shape_text(const BetaWeightPrior& prior) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "Beta(%g, %g)", prior.eta(), prior.nu());
    return buf;
}

}  // namespace

std::string JeffreysCategory::describe(const std::string& numerator, const std::string& denominator) const {
    if (direction == 0) return band + " (no preference)";
    return band + " for " + (direction > 0 ? numerator : denominator);
}

JeffreysCategory jeffreys_category(double value) {
    if (!(value > 0.0)) throw DomainError("Bayes factor must be positive");
    const int direction = value > 1.0 ? 1 : (value < 1.0 ? -1 : 0);
    const double oriented = value >= 1.0 ? value : 1.0 / value;
    std::string band;
    if (oriented <= 3.2) band = "Barely worth mentioning";
    else if (oriented <= 10.0) band = "Substantial evidence";
    else if (oriented <= 31.6) band = "Strong evidence";
    else if (oriented <= 100.0) band = "Very strong evidence";
    else band = "Decisive evidence";
    return {band, direction};
}

std::string format_bf(double value) {
    if (!(value > 0.0)) throw DomainError("Bayes factor must be positive");
    if (value < 1.0 / 1000.0) return "<1/1000";
    if (value <= 1.0 / 10.0) return "1/" + rounded(1.0 / value, 0);
    if (value < 1.0) return "1/" + rounded(1.0 / value, 1);
    if (value < 10.0) return rounded(value, 1);
    if (value <= 1000.0) return rounded(value, 0);
    return ">1000";
}

BayesFactorReport make_report(double log_value, std::string numerator, std::string denominator) {
    if (std::isnan(log_value)) throw NumericError("Bayes factor is NaN", log_value);
    BayesFactorReport r;
    r.log_value = log_value;
    r.value = std::exp(log_value);
    r.numerator = std::move(numerator);
    r.denominator = std::move(denominator);
    // Extreme values keep their direction even when exp() saturates.
    const double shown = std::clamp(r.value, std::numeric_limits<double>::min(), std::numeric_limits<double>::max());
    r.formatted = format_bf(shown);
    r.category = jeffreys_category(shown);
    return r;
}

BayesFactorReport bf_dc_point(const StudySummary& rep, const StudySummary& original, const VagueComponent& vague) {
    const auto p = predictive_log_densities(rep, original, vague);
    return make_report(p.vague - p.consistent, "H_d: omega = 0", "H_c: omega = 1");
}

BayesFactorReport bf_dc_beta(const StudySummary& rep, const StudySummary& original, const VagueComponent& vague,
                             const BetaWeightPrior& prior) {
    const auto p = predictive_log_densities(rep, original, vague);
    const double log_numerator = log_marginal_likelihood_random(rep, original, vague, prior);
    return make_report(log_numerator - p.consistent, "H_d: omega ~ " + shape_text(prior),
                       "H_c: omega = 1");
}

BayesFactorReport bf_01_mixture(const StudySummary& rep, const StudySummary& original, const VagueComponent& vague,
                                const BetaWeightPrior& prior) {
    const double log_null = numerics::normal_log_density(rep.estimate(), 0.0, rep.variance()).value;
    const double log_alternative = log_marginal_likelihood_random(rep, original, vague, prior);
    return make_report(log_null - log_alternative, "H_0: theta = 0",
                       "H_1: omega ~ " + shape_text(prior));
}

BayesFactorReport bf_01_replication(const StudySummary& rep, const StudySummary& original) {
    const double log_null = numerics::normal_log_density(rep.estimate(), 0.0, rep.variance()).value;
    const double log_alternative =
        numerics::normal_log_density(rep.estimate(), original.estimate(), rep.variance() + original.variance()).value;
    return make_report(log_null - log_alternative, "H_0: theta = 0", "H_1: omega = 1");
}

double bf_limit_small_sigma_r(double rep_estimate, const StudySummary& original, const VagueComponent& vague) {
    return std::exp(numerics::normal_log_density(rep_estimate, vague.mu(), vague.tau2()).value -
                    numerics::normal_log_density(rep_estimate, original.estimate(), original.variance()).value);
}

}  // namespace repmix
