#include "repmix/numerics.hpp"

#include "repmix/errors.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

namespace repmix::numerics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gauss-Kronrod 7/15 abscissae (non-negative half) and weights.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the Kronrod nodes at odd indices (1, 3, 5) and the centre.
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double lo;
    double hi;
    double value;
    double error;

    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod_15(const std::function<double(double)>& f, double lo, double hi) {
    const double centre = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double f_centre = f(centre);
    double kronrod = f_centre * kKronrodWeights[7];
    double gauss = f_centre * kGaussWeights[3];
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double pair = f(centre - dx) + f(centre + dx);
        kronrod += kKronrodWeights[i] * pair;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
    }
    return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace

LogDensity normal_log_density(double x, double mean, double variance) {
    require_finite(x, "x");
    require_finite(mean, "mean");
    if (!(variance > 0.0) || !std::isfinite(variance))
        throw DomainError("normal variance must be positive and finite");
    const double z = x - mean;
    return {-0.5 * (std::log(2.0 * std::numbers::pi * variance) + z * z / variance)};
}

LogDensity beta_log_density(double w, double eta, double nu) {
    if (!(eta > 0.0) || !(nu > 0.0) || !std::isfinite(eta) || !std::isfinite(nu))
        throw DomainError("beta shape parameters must be positive and finite");
    if (!(w >= 0.0 && w <= 1.0)) throw DomainError("beta argument must lie in [0, 1]");
    const double log_norm = std::lgamma(eta + nu) - std::lgamma(eta) - std::lgamma(nu);
    auto term = [](double shape_minus_one, double base) {
        if (shape_minus_one == 0.0) return 0.0;
        if (base == 0.0) return shape_minus_one > 0.0 ? -kInf : kInf;
        return shape_minus_one * std::log(base);
    };
    return {log_norm + term(eta - 1.0, w) + term(nu - 1.0, 1.0 - w)};
}

double normal_cdf(double x, double mean, double variance) {
    if (!(variance > 0.0) || !std::isfinite(variance))
        throw DomainError("normal variance must be positive and finite");
    if (std::isnan(x) || std::isnan(mean)) throw DomainError("normal_cdf argument is NaN");
    return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * variance));
}

double standard_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("probability must lie in (0, 1)");
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double log_sum_exp(double a, double b) noexcept {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double log_weighted_sum_exp(double wa, double a, double wb, double b) noexcept {
    const double la = wa > 0.0 ? std::log(wa) + a : -kInf;
    const double lb = wb > 0.0 ? std::log(wb) + b : -kInf;
    return log_sum_exp(la, lb);
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol,
                 double f_tol) {
    if (!(tol > 0.0)) throw DomainError("root tolerance must be positive");
    if (lo > hi) std::swap(lo, hi);
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if (std::isnan(f_lo) || std::isnan(f_hi)) throw DomainError("root function is NaN at a bracket end");
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) throw DomainError("interval does not bracket a root");
    if (std::abs(f_lo) <= f_tol) return lo;
    if (std::abs(f_hi) <= f_tol) return hi;

    // Evaluations within f_tol are reported as exact zeros, which stops the solver.
    double accepted = std::numeric_limits<double>::quiet_NaN();
    auto wrapped = [&](double x) {
        const double v = f(x);
        if (std::abs(v) <= f_tol) {
            accepted = x;
            return 0.0;
        }
        return v;
    };
    auto width_ok = [tol](double a, double b) {
        const double scale = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
        return std::abs(b - a) <= std::max(tol, scale);
    };
    std::uintmax_t max_iter = 400;
    const auto [a, b] = boost::math::tools::toms748_solve(wrapped, lo, hi, f_lo, f_hi, width_ok, max_iter);
    if (!std::isnan(accepted)) return accepted;
    const double mid = 0.5 * (a + b);
    if (!width_ok(a, b) && a != b) throw NumericError("root finding did not converge", mid);
    return a == b ? a : mid;
}

QuadratureResult integrate_with_error(const std::function<double(double)>& f, double lo, double hi,
                                      double abs_tol, int max_subdivisions) {
    if (!(abs_tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("quadrature limits must be finite");
    if (lo == hi) return {};
    const double sign = hi < lo ? -1.0 : 1.0;
    if (hi < lo) std::swap(lo, hi);

    std::priority_queue<Segment> segments;
    segments.push(gauss_kronrod_15(f, lo, hi));
    double total = segments.top().value;
    double error = segments.top().error;
    int evaluations = 15;

    while (error > abs_tol) {
        if (static_cast<int>(segments.size()) >= max_subdivisions) {
            throw NumericError("adaptive quadrature exceeded its subdivision budget (error " +
                                   std::to_string(error) + ")",
                               sign * total);
        }
        const Segment worst = segments.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            throw NumericError("adaptive quadrature reached machine resolution", sign * total);
        }
        segments.pop();
        const Segment left = gauss_kronrod_15(f, worst.lo, mid);
        const Segment right = gauss_kronrod_15(f, mid, worst.hi);
        evaluations += 30;
        segments.push(left);
        segments.push(right);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        if (!std::isfinite(total)) throw NumericError("integrand is not finite on the interval", total);
    }

    // Re-sum from the pieces to shed accumulated update round-off.
    double value = 0.0;
    double err = 0.0;
    while (!segments.empty()) {
        value += segments.top().value;
        err += segments.top().error;
        segments.pop();
    }
    return {sign * value, err, evaluations};
}

double integrate_piecewise(const std::function<double(double)>& f, std::span<const double> breakpoints,
                           double abs_tol) {
    std::vector<double> points(breakpoints.begin(), breakpoints.end());
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() < 2) return 0.0;
    const double share = abs_tol / static_cast<double>(points.size() - 1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        total += integrate_with_error(f, points[i], points[i + 1], share).value;
    }
    return total;
}

}  // namespace repmix::numerics
