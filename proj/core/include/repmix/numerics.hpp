#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>

namespace repmix {

/// Natural-log density value. -infinity encodes zero density.
struct LogDensity {
    double value = -std::numeric_limits<double>::infinity();

    double density() const noexcept { return std::exp(value); }
    bool is_zero() const noexcept { return value == -std::numeric_limits<double>::infinity(); }

    friend auto operator<=>(const LogDensity&, const LogDensity&) = default;
};

namespace numerics {

inline constexpr double kDefaultQuadratureTolerance = 1e-10;

/// log N(x | mean, variance). Throws DomainError unless variance > 0 and inputs finite.
LogDensity normal_log_density(double x, double mean, double variance);

/// log Beta(w | eta, nu) on [0, 1]. May be +inf at an endpoint when a shape is below one.
LogDensity beta_log_density(double w, double eta, double nu);

/// P(X <= x) for X ~ N(mean, variance), via erfc so both tails keep relative accuracy.
double normal_cdf(double x, double mean, double variance);

/// Standard normal quantile (inverse of normal_cdf(., 0, 1)).
double standard_normal_quantile(double p);

/// log(exp(a) + exp(b)) without overflow; either argument may be -inf.
double log_sum_exp(double a, double b) noexcept;

/// Weighted form log(wa * exp(a) + wb * exp(b)) for nonnegative weights.
double log_weighted_sum_exp(double wa, double a, double wb, double b) noexcept;

/// Bracketed root of a continuous function. Uses a bisection-safeguarded
/// interpolation scheme (TOMS 748); never evaluates derivatives.
/// Terminates when f(x) == 0, |f(x)| <= f_tol, or the bracket width <= tol.
/// Throws DomainError when f(lo) and f(hi) have the same strict sign.
double find_root(const std::function<double(double)>& f, double lo, double hi, double tol,
                 double f_tol = 0.0);

/// Result of an adaptive quadrature.
struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature over [lo, hi].
/// Throws NumericError (carrying the best estimate) if the error estimate
/// cannot be pushed below abs_tol within the subdivision budget.
QuadratureResult integrate_with_error(const std::function<double(double)>& f, double lo, double hi,
                                      double abs_tol = kDefaultQuadratureTolerance,
                                      int max_subdivisions = 2000);

inline double integrate(const std::function<double(double)>& f, double lo, double hi,
                        double abs_tol = kDefaultQuadratureTolerance) {
    return integrate_with_error(f, lo, hi, abs_tol).value;
}

/// Integrates piecewise over consecutive breakpoints (sorted, deduplicated
/// internally), splitting the tolerance evenly. Useful for sharply peaked
/// integrands whose peaks are known.
double integrate_piecewise(const std::function<double(double)>& f, std::span<const double> breakpoints,
                           double abs_tol = kDefaultQuadratureTolerance);

}  // namespace numerics
}  // namespace repmix
