#include "repmix/mixture_posterior.hpp"

#include "repmix/errors.hpp"

#include <algorithm>
#include <cmath>

namespace repmix {

namespace {

void validate_component(const NormalComponent& c, const char* which) {
    if (!std::isfinite(c.mean)) throw ValidationError(std::string(which) + " mean must be finite");
    if (!(c.variance > 0.0) || !std::isfinite(c.variance))
        throw ValidationError(std::string(which) + " variance must be positive and finite");
}

NormalComponent conjugate_update(const NormalComponent& prior, const StudySummary& rep) {
    const double precision = 1.0 / prior.variance + 1.0 / rep.variance();
    const double variance = 1.0 / precision;
    const double mean = (prior.mean / prior.variance + rep.estimate() / rep.variance()) * variance;
    if (!(variance > 0.0) || !std::isfinite(variance) || !std::isfinite(mean))
        throw NumericError("conjugate update left the floating-point range", mean);
    return {mean, variance};
}

}  // namespace

VagueComponent::VagueComponent(double mu, double tau2) : mu_(mu), tau2_(tau2) {
    if (!std::isfinite(mu_)) throw ValidationError("vague mean mu must be finite");
    if (!(tau2_ > 0.0) || !std::isfinite(tau2_))
        throw ValidationError("vague variance tau2 must be positive and finite");
}

FixedWeight::FixedWeight(double omega) : omega_(omega) {
    if (!(omega_ >= 0.0 && omega_ <= 1.0)) throw ValidationError("weight omega must lie in [0, 1]");
}

TwoComponentNormalMixture::TwoComponentNormalMixture(double weight_informative, NormalComponent informative,
                                                     NormalComponent vague)
    : weight_(weight_informative), informative_(informative), vague_(vague) {
    if (!(weight_ >= 0.0 && weight_ <= 1.0)) throw ValidationError("mixture weight must lie in [0, 1]");
    validate_component(informative_, "informative");
    validate_component(vague_, "vague");
}

TwoComponentNormalMixture TwoComponentNormalMixture::single(double mean, double variance) {
    return TwoComponentNormalMixture(1.0, {mean, variance}, {mean, variance});
}

LogDensity TwoComponentNormalMixture::log_density(double theta) const {
    const double a = numerics::normal_log_density(theta, informative_.mean, informative_.variance).value;
    const double b = numerics::normal_log_density(theta, vague_.mean, vague_.variance).value;
    return {numerics::log_weighted_sum_exp(weight_, a, 1.0 - weight_, b)};
}

double TwoComponentNormalMixture::scaled_derivative(double theta, double log_scale) const {
    double total = 0.0;
    auto add = [&](double w, const NormalComponent& c) {
        if (w <= 0.0) return;
        const double log_term = std::log(w) + numerics::normal_log_density(theta, c.mean, c.variance).value;
        total += std::exp(log_term - log_scale) * (c.mean - theta) / c.variance;
    };
    add(weight_, informative_);
    add(1.0 - weight_, vague_);
    return total;
}

double TwoComponentNormalMixture::mean() const noexcept {
    return weight_ * informative_.mean + (1.0 - weight_) * vague_.mean;
}

std::pair<double, double> TwoComponentNormalMixture::support_span(double sd_multiple) const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sd_max = 0.0;
    auto include = [&](double w, const NormalComponent& c) {
        if (w <= 0.0) return;
        lo = std::min(lo, c.mean);
        hi = std::max(hi, c.mean);
        sd_max = std::max(sd_max, std::sqrt(c.variance));
    };
    include(weight_, informative_);
    include(1.0 - weight_, vague_);
    return {lo - sd_multiple * sd_max, hi + sd_multiple * sd_max};
}

TwoComponentNormalMixture build_prior(const StudySummary& original, const VagueComponent& vague, FixedWeight w) {
    return TwoComponentNormalMixture(w.omega(), {original.estimate(), original.variance()},
                                     {vague.mu(), vague.tau2()});
}

TwoComponentNormalMixture update_fixed(const TwoComponentNormalMixture& prior, const StudySummary& rep) {
    const auto informative = conjugate_update(prior.informative(), rep);
    const auto vague = conjugate_update(prior.vague(), rep);
    const double omega = prior.weight_informative();
    if (omega == 0.0 || omega == 1.0) return TwoComponentNormalMixture(omega, informative, vague);

    const double log_consistent = numerics::normal_log_density(rep.estimate(), prior.mean_informative(),
                                                               prior.var_informative() + rep.variance())
                                      .value;
    const double log_vague =
        numerics::normal_log_density(rep.estimate(), prior.mean_vague(), prior.var_vague() + rep.variance())
            .value;
    const double log_a = std::log(omega) + log_consistent;
    const double log_b = std::log1p(-omega) + log_vague;
    const double updated = std::exp(log_a - numerics::log_sum_exp(log_a, log_b));
    return TwoComponentNormalMixture(std::clamp(updated, 0.0, 1.0), informative, vague);
}

PredictiveLogDensities predictive_log_densities(const StudySummary& rep, const StudySummary& original,
                                                const VagueComponent& vague) {
    return {numerics::normal_log_density(rep.estimate(), original.estimate(), rep.variance() + original.variance())
                .value,
            numerics::normal_log_density(rep.estimate(), vague.mu(), rep.variance() + vague.tau2()).value};
}

double log_marginal_likelihood_fixed(const StudySummary& rep, const StudySummary& original,
                                     const VagueComponent& vague, FixedWeight w) {
    const auto p = predictive_log_densities(rep, original, vague);
    return numerics::log_weighted_sum_exp(w.omega(), p.consistent, 1.0 - w.omega(), p.vague);
}

double marginal_likelihood_fixed(const StudySummary& rep, const StudySummary& original,
                                 const VagueComponent& vague, FixedWeight w) {
    const auto p = predictive_log_densities(rep, original, vague);
    return w.omega() * std::exp(p.consistent) + (1.0 - w.omega()) * std::exp(p.vague);
}

EmpiricalBayesWeight empirical_bayes_weight(const StudySummary& rep, const StudySummary& original,
                                            const VagueComponent& vague) {
    const auto p = predictive_log_densities(rep, original, vague);
    if (std::abs(p.consistent - p.vague) <= kEmpiricalBayesTieTolerance) return {0.5, true};
    return {p.consistent > p.vague ? 1.0 : 0.0, false};
}

}  // namespace repmix
