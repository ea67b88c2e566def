#pragma once

#include "repmix/numerics.hpp"
#include "repmix/study_data.hpp"

namespace repmix {

/// The non-informative alternative N(mu, tau2). tau2 must be finite: an
/// improper component would make the updated weight identically one.
class VagueComponent {
public:
    static constexpr double kDefaultMean = 0.0;
    /// Unit-information variance for standardized mean differences.
    static constexpr double kDefaultVariance = 2.0;

    VagueComponent() = default;
    VagueComponent(double mu, double tau2);

    double mu() const noexcept { return mu_; }
    double tau2() const noexcept { return tau2_; }

    friend bool operator==(const VagueComponent&, const VagueComponent&) = default;

private:
    double mu_ = kDefaultMean;
    double tau2_ = kDefaultVariance;
};

/// Prior weight of the informative (original-study) component, in [0, 1].
class FixedWeight {
public:
    explicit FixedWeight(double omega);

    double omega() const noexcept { return omega_; }

    friend bool operator==(const FixedWeight&, const FixedWeight&) = default;

private:
    double omega_;
};

/// Normal component with mean and (strictly positive, finite) variance.
struct NormalComponent {
    double mean = 0.0;
    double variance = 1.0;

    friend bool operator==(const NormalComponent&, const NormalComponent&) = default;
};

/// w * N(informative) + (1 - w) * N(vague). Used both for the prior built
/// from the original study and for the posterior after a replication.
class TwoComponentNormalMixture {
public:
    TwoComponentNormalMixture(double weight_informative, NormalComponent informative, NormalComponent vague);

    /// A single normal (weight one on the informative slot).
    static TwoComponentNormalMixture single(double mean, double variance);

    double weight_informative() const noexcept { return weight_; }
    double weight_vague() const noexcept { return 1.0 - weight_; }
    const NormalComponent& informative() const noexcept { return informative_; }
    const NormalComponent& vague() const noexcept { return vague_; }

    double mean_informative() const noexcept { return informative_.mean; }
    double var_informative() const noexcept { return informative_.variance; }
    double mean_vague() const noexcept { return vague_.mean; }
    double var_vague() const noexcept { return vague_.variance; }

    LogDensity log_density(double theta) const;
    double density(double theta) const { return log_density(theta).density(); }
    /// d/dtheta density(theta) divided by exp(scale) for a caller-chosen scale,
    /// so the sign survives where the density itself underflows.
    double scaled_derivative(double theta, double log_scale) const;
    double mean() const noexcept;
    /// True when one weight is exactly zero.
    bool is_degenerate() const noexcept { return weight_ == 0.0 || weight_ == 1.0; }

    /// [lowest component mean - k*sd_max, highest component mean + k*sd_max]
    /// over the components carrying positive weight.
    std::pair<double, double> support_span(double sd_multiple = 8.0) const;

    friend bool operator==(const TwoComponentNormalMixture&, const TwoComponentNormalMixture&) = default;

private:
    double weight_;
    NormalComponent informative_;
    NormalComponent vague_;
};

/// omega * N(original.estimate, original.se^2) + (1 - omega) * N(mu, tau2).
TwoComponentNormalMixture build_prior(const StudySummary& original, const VagueComponent& vague, FixedWeight w);

/// Conjugate update of both components on one (possibly pooled) replication.
/// The updated weight is computed from log predictive densities, and weights
/// of exactly 0 or 1 are carried through unchanged.
TwoComponentNormalMixture update_fixed(const TwoComponentNormalMixture& prior, const StudySummary& rep);

/// Log predictive densities of the replication estimate under each component:
/// log N(rep | original, se_r^2 + se_o^2) and log N(rep | mu, se_r^2 + tau2).
struct PredictiveLogDensities {
    double consistent;
    double vague;
};

PredictiveLogDensities predictive_log_densities(const StudySummary& rep, const StudySummary& original,
                                                const VagueComponent& vague);

/// omega * N(rep | original, se_r^2 + se_o^2) + (1 - omega) * N(rep | mu, se_r^2 + tau2).
double marginal_likelihood_fixed(const StudySummary& rep, const StudySummary& original,
                                 const VagueComponent& vague, FixedWeight w);
double log_marginal_likelihood_fixed(const StudySummary& rep, const StudySummary& original,
                                     const VagueComponent& vague, FixedWeight w);

struct EmpiricalBayesWeight {
    /// 1 or 0, or 0.5 on a tie.
    double omega_hat;
    bool tie;
};

/// Log predictive densities closer than this are treated as equal.
inline constexpr double kEmpiricalBayesTieTolerance = 1e-12;

/// Maximizer of the marginal likelihood over omega in [0, 1]. Linearity in
/// omega puts it at an endpoint unless the two predictives coincide.
EmpiricalBayesWeight empirical_bayes_weight(const StudySummary& rep, const StudySummary& original,
                                            const VagueComponent& vague);

}  // namespace repmix
