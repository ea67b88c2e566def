#pragma once

#include "repmix/mixture_posterior.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace repmix {

struct Interval {
    double lo;
    double hi;

    double length() const noexcept { return hi - lo; }
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Highest posterior density region: the superlevel set {theta : density >= density_cut}
/// holding `level` posterior mass. One or two sorted, disjoint intervals.
struct HpdiSet {
    double level = 0.95;
    std::vector<Interval> intervals;
    double attained_mass = 0.0;
    double density_cut = 0.0;
    /// Set when the region was replaced by its convex hull on request.
    bool forced_hull = false;

    double total_length() const noexcept;
    bool contains(double x) const noexcept;
    bool is_disjoint() const noexcept { return intervals.size() > 1; }
};

struct HpdiOptions {
    /// Return the convex hull of a disjoint region instead of the region itself.
    bool force_interval = false;
};

/// Evenly spaced density evaluations plus the analysis parameters behind them.
struct DensityGrid {
    std::vector<std::pair<double, double>> points;  // (theta, density)
    std::map<std::string, std::string> metadata;
};

/// w * Phi((x - m1) / sqrt(v1)) + (1 - w) * Phi((x - m2) / sqrt(v2)).
double mixture_cdf(const TwoComponentNormalMixture& m, double x);

/// x with mixture_cdf(x) = p to within 1e-10. Requires 0 < p < 1.
double posterior_quantile(const TwoComponentNormalMixture& m, double p);

inline double posterior_median(const TwoComponentNormalMixture& m) { return posterior_quantile(m, 0.5); }

/// Stationary points of the density, ascending: one mode, or mode / antimode / mode.
std::vector<double> critical_points(const TwoComponentNormalMixture& m);

/// Number of strict local maxima of the density (1 or 2).
int mode_count(const TwoComponentNormalMixture& m);

/// Level-`level` HPD region, located by solving for the density cut whose
/// superlevel set holds the requested mass. Requires 0 < level < 1.
HpdiSet hpdi(const TwoComponentNormalMixture& m, double level = 0.95, HpdiOptions options = {});

/// Requires lo < hi and n >= 2.
DensityGrid density_grid(const TwoComponentNormalMixture& m, double lo, double hi, int n,
                         std::map<std::string, std::string> metadata = {});

enum class TippingRegime { always_excludes, never_excludes, crossing };

struct TippingOptions {
    double level = 0.95;
    double threshold = 0.0;
    /// Coarse scan resolution in omega.
    double grid_step = 0.01;
    /// Bisection tolerance on each crossing.
    double tolerance = 1e-4;
};

struct TippingTracePoint {
    double omega;
    double median;
    HpdiSet region;
    bool excludes_threshold;
};

/// Result of the reverse-Bayes weight search. `crossings` lists every omega
/// where exclusion of the threshold flips; `monotone` is false when it flips
/// more than once.
struct TippingPointResult {
    std::optional<double> omega_star;
    TippingRegime regime = TippingRegime::never_excludes;
    std::vector<double> crossings;
    bool monotone = true;
    std::vector<TippingTracePoint> trace;
};

/// Smallest prior weight omega whose posterior HPD region excludes the
/// threshold. Scans omega on a grid, then bisects every sign change.
TippingPointResult tipping_point(const StudySummary& original, const StudySummary& rep,
                                 const VagueComponent& vague, const TippingOptions& options = {});

std::string to_string(TippingRegime regime);

}  // namespace repmix
