#include "repmix/random_weight.hpp"

#include "repmix/errors.hpp"

#include <cmath>

namespace repmix {

BetaWeightPrior::BetaWeightPrior(double eta, double nu) : eta_(eta), nu_(nu) {
    if (!(eta_ > 0.0) || !std::isfinite(eta_)) throw ValidationError("beta shape eta must be positive and finite");
    if (!(nu_ > 0.0) || !std::isfinite(nu_)) throw ValidationError("beta shape nu must be positive and finite");
}

LogDensity BetaWeightPrior::log_density(double w) const { return numerics::beta_log_density(w, eta_, nu_); }

WeightPosterior::WeightPosterior(BetaWeightPrior prior, PredictiveLogDensities predictive)
    : prior_(prior), log_consistent_(predictive.consistent), log_vague_(predictive.vague) {
    const double e = prior_.expected_weight();
    log_normalizer_ = numerics::log_weighted_sum_exp(e, log_consistent_, 1.0 - e, log_vague_);
}

LogDensity WeightPosterior::log_density(double w) const {
    const double log_prior = prior_.log_density(w).value;
    const double log_likelihood = numerics::log_weighted_sum_exp(w, log_consistent_, 1.0 - w, log_vague_);
    return {log_prior + log_likelihood - log_normalizer_};
}

double WeightPosterior::mean() const {
    // E[w * L(w)] / E[L(w)] with E[w^2] = eta (eta + 1) / ((eta + nu)(eta + nu + 1)).
    const double a = eta();
    const double b = nu();
    const double m1 = a / (a + b);
    const double m2 = a * (a + 1.0) / ((a + b) * (a + b + 1.0));
    const double log_num = numerics::log_weighted_sum_exp(m2, log_consistent_, m1 - m2, log_vague_);
    return std::exp(log_num - log_normalizer_);
}

double log_marginal_likelihood_random(const StudySummary& rep, const StudySummary& original,
                                      const VagueComponent& vague, const BetaWeightPrior& prior) {
    return log_marginal_likelihood_fixed(rep, original, vague, FixedWeight(prior.expected_weight()));
}

double marginal_likelihood_random(const StudySummary& rep, const StudySummary& original,
                                  const VagueComponent& vague, const BetaWeightPrior& prior) {
    const auto p = predictive_log_densities(rep, original, vague);
    const double consistent = std::exp(p.consistent);
    const double vague_density = std::exp(p.vague);
    return prior.expected_weight() * (consistent - vague_density) + vague_density;
}

double joint_posterior_density(double theta, double w, const StudySummary& rep, const StudySummary& original,
                               const VagueComponent& vague, const BetaWeightPrior& prior) {
    if (!(w >= 0.0 && w <= 1.0)) throw DomainError("weight must lie in [0, 1]");
    const double log_likelihood = numerics::normal_log_density(rep.estimate(), theta, rep.variance()).value;
    const double log_weight_prior = prior.log_density(w).value;
    const auto conditional = build_prior(original, vague, FixedWeight(w));
    const double log_conditional = conditional.log_density(theta).value;
    const double log_evidence = log_marginal_likelihood_random(rep, original, vague, prior);
    return std::exp(log_likelihood + log_weight_prior + log_conditional - log_evidence);
}

WeightPosterior weight_marginal_posterior(const StudySummary& rep, const StudySummary& original,
                                          const VagueComponent& vague, const BetaWeightPrior& prior) {
    return WeightPosterior(prior, predictive_log_densities(rep, original, vague));
}

TwoComponentNormalMixture effect_marginal_posterior(const StudySummary& rep, const StudySummary& original,
                                                    const VagueComponent& vague, const BetaWeightPrior& prior) {
    return update_fixed(build_prior(original, vague, FixedWeight(prior.expected_weight())), rep);
}

double weight_posterior_density_from_bf(double w, const BetaWeightPrior& prior, double bf_dc) {
    if (!(bf_dc > 0.0)) throw DomainError("Bayes factor must be positive");
    const double e = prior.expected_weight();
    return prior.log_density(w).density() * (w + (1.0 - w) * bf_dc) / (e * (1.0 - bf_dc) + bf_dc);
}

BetaWeightPrior weight_posterior_limit(const BetaWeightPrior& prior, EvidenceLimit direction) {
    return direction == EvidenceLimit::consistency_overwhelming ? BetaWeightPrior(prior.eta() + 1.0, prior.nu())
                                                                : BetaWeightPrior(prior.eta(), prior.nu() + 1.0);
}

}  // namespace repmix
