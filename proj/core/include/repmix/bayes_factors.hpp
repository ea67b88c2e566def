#pragma once

#include "repmix/random_weight.hpp"

#include <optional>
#include <string>

namespace repmix {

/// Evidence band of the Jeffreys scale, after orienting the Bayes factor so it is >= 1.
struct JeffreysCategory {
    /// "Barely worth mentioning", "Substantial evidence", "Strong evidence",
    /// "Very strong evidence" or "Decisive evidence".
    std::string band;
    /// +1 supports the numerator hypothesis, -1 the denominator, 0 neither (BF == 1).
    int direction = 0;

    /// e.g. "Strong evidence for H_d"; BF == 1 reads "Barely worth mentioning (no preference)".
    std::string describe(const std::string& numerator, const std::string& denominator) const;
};

JeffreysCategory jeffreys_category(double value);

/// Table-style rendering: below 1/1000 "<1/1000", up to 1/10 "1/x" with x an
/// integer, below 1 "1/x.x", below 10 one decimal, up to 1000 an integer,
/// above that ">1000". Trailing ".0" is dropped.
std::string format_bf(double value);

struct BayesFactorReport {
    double value = 1.0;
    /// log(value), retained even where value itself under- or overflows.
    double log_value = 0.0;
    std::string numerator;
    std::string denominator;
    std::string formatted;
    JeffreysCategory category;

    /// "<numerator> vs <denominator>"
    std::string orientation() const { return numerator + " vs " + denominator; }
    std::string jeffreys_label() const { return category.describe(numerator, denominator); }
};

BayesFactorReport make_report(double log_value, std::string numerator, std::string denominator);

/// H_d (omega = 0) against H_c (omega = 1): p_v / p_c.
BayesFactorReport bf_dc_point(const StudySummary& rep, const StudySummary& original, const VagueComponent& vague);

/// H_d (omega ~ Beta(eta, nu)) against H_c (omega = 1).
BayesFactorReport bf_dc_beta(const StudySummary& rep, const StudySummary& original, const VagueComponent& vague,
                             const BetaWeightPrior& prior = BetaWeightPrior(1.0, 2.0));

/// H_0 (theta = 0) against H_1 (mixture prior with omega ~ Beta(eta, nu)).
BayesFactorReport bf_01_mixture(const StudySummary& rep, const StudySummary& original, const VagueComponent& vague,
                                const BetaWeightPrior& prior = BetaWeightPrior(1.0, 1.0));

/// H_0 (theta = 0) against H_1 (original-study posterior, omega = 1).
BayesFactorReport bf_01_replication(const StudySummary& rep, const StudySummary& original);

/// Limit of bf_dc_point as the replication standard error goes to zero:
/// N(rep_estimate | mu, tau2) / N(rep_estimate | original, se_o^2).
double bf_limit_small_sigma_r(double rep_estimate, const StudySummary& original, const VagueComponent& vague);

}  // namespace repmix
