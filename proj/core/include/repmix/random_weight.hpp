#pragma once

#include "repmix/mixture_posterior.hpp"

namespace repmix {

/// Beta(eta, nu) prior on the informative weight.
class BetaWeightPrior {
public:
    BetaWeightPrior(double eta, double nu);

    double eta() const noexcept { return eta_; }
    double nu() const noexcept { return nu_; }
    /// eta / (eta + nu)
    double expected_weight() const noexcept { return eta_ / (eta_ + nu_); }
    LogDensity log_density(double w) const;

    friend bool operator==(const BetaWeightPrior&, const BetaWeightPrior&) = default;

private:
    double eta_;
    double nu_;
};

/// Marginal posterior of the weight given one replication:
///   Beta(w | eta, nu) * {w * p_c + (1 - w) * p_v} / normalizer
/// with p_c, p_v the predictive densities of the replication estimate under
/// the informative and vague components. Stored in log space.
class WeightPosterior {
public:
    WeightPosterior(BetaWeightPrior prior, PredictiveLogDensities predictive);

    const BetaWeightPrior& prior() const noexcept { return prior_; }
    double eta() const noexcept { return prior_.eta(); }
    double nu() const noexcept { return prior_.nu(); }
    double log_predictive_consistent() const noexcept { return log_consistent_; }
    double log_predictive_vague() const noexcept { return log_vague_; }
    double log_normalizer() const noexcept { return log_normalizer_; }
    double predictive_consistent() const { return std::exp(log_consistent_); }
    double predictive_vague() const { return std::exp(log_vague_); }
    double normalizer() const { return std::exp(log_normalizer_); }

    LogDensity log_density(double w) const;
    double density(double w) const { return log_density(w).density(); }
    /// Posterior mean of the weight, in closed form.
    double mean() const;

private:
    BetaWeightPrior prior_;
    double log_consistent_;
    double log_vague_;
    double log_normalizer_;
};

/// E[w] * {p_c - p_v} + p_v, i.e. the fixed-weight marginal likelihood at w = E[w].
double marginal_likelihood_random(const StudySummary& rep, const StudySummary& original,
                                  const VagueComponent& vague, const BetaWeightPrior& prior);
double log_marginal_likelihood_random(const StudySummary& rep, const StudySummary& original,
                                      const VagueComponent& vague, const BetaWeightPrior& prior);

/// Joint posterior density of (theta, w). Throws DomainError for w outside [0, 1].
double joint_posterior_density(double theta, double w, const StudySummary& rep, const StudySummary& original,
                               const VagueComponent& vague, const BetaWeightPrior& prior);

WeightPosterior weight_marginal_posterior(const StudySummary& rep, const StudySummary& original,
                                          const VagueComponent& vague, const BetaWeightPrior& prior);

/// Marginal posterior of theta: the fixed-weight posterior at w = E[w].
TwoComponentNormalMixture effect_marginal_posterior(const StudySummary& rep, const StudySummary& original,
                                                    const VagueComponent& vague, const BetaWeightPrior& prior);

/// Weight posterior written through BF_dc = p_v / p_c:
///   Beta(w) * {w + (1 - w) * BF_dc} / {E[w] * (1 - BF_dc) + BF_dc}.
double weight_posterior_density_from_bf(double w, const BetaWeightPrior& prior, double bf_dc);

enum class EvidenceLimit {
    consistency_overwhelming,  ///< BF_dc -> 0
    conflict_overwhelming,     ///< BF_dc -> infinity
};

/// Limiting weight posterior: the prior updated by one pseudo-observation.
BetaWeightPrior weight_posterior_limit(const BetaWeightPrior& prior, EvidenceLimit direction);

}  // namespace repmix
