#include "repmix/summaries.hpp"

#include "repmix/errors.hpp"

#include <algorithm>
#include <cmath>

namespace repmix {

namespace {

constexpr int kMaxCriticalGrid = 200000;
// Lower end of the density-cut search, in log units below the highest mode.
constexpr double kCutSearchDepth = 120.0;

double sd_min_of(const TwoComponentNormalMixture& m) {
    double sd = std::numeric_limits<double>::infinity();
    if (m.weight_informative() > 0.0) sd = std::min(sd, std::sqrt(m.var_informative()));
    if (m.weight_vague() > 0.0) sd = std::min(sd, std::sqrt(m.var_vague()));
    return sd;
}

double sd_max_of(const TwoComponentNormalMixture& m) {
    double sd = 0.0;
    if (m.weight_informative() > 0.0) sd = std::max(sd, std::sqrt(m.var_informative()));
    if (m.weight_vague() > 0.0) sd = std::max(sd, std::sqrt(m.var_vague()));
    return sd;
}

double log_density(const TwoComponentNormalMixture& m, double x) { return m.log_density(x).value; }

// Superlevel sets {x : log f(x) >= cut} of a density with known stationary points.
class LevelSets {
public:
    explicit LevelSets(const TwoComponentNormalMixture& m)
        : m_(m), critical_(critical_points(m)), sd_max_(sd_max_of(m)) {
        for (double c : critical_) log_critical_.push_back(log_density(m_, c));
        x_tol_ = 1e-12 * std::max(sd_min_of(m_), 1e-300);
    }

    double log_peak() const {
        return *std::max_element(log_critical_.begin(), log_critical_.end());
    }

    std::vector<Interval> region(double cut) const {
        if (critical_.size() == 1) {
            if (log_critical_[0] < cut) return {};
            return {{left_tail(critical_[0], cut), right_tail(critical_[0], cut)}};
        }
        const double left_mode = critical_.front();
        const double antimode = critical_[1];
        const double right_mode = critical_.back();
        if (cut <= log_critical_[1]) return {{left_tail(left_mode, cut), right_tail(right_mode, cut)}};
        std::vector<Interval> out;
        if (log_critical_.front() >= cut) out.push_back({left_tail(left_mode, cut), between(left_mode, antimode, cut)});
        if (log_critical_.back() >= cut) out.push_back({between(antimode, right_mode, cut), right_tail(right_mode, cut)});
        return out;
    }

    double mass(const std::vector<Interval>& intervals) const {
        double total = 0.0;
        for (const auto& iv : intervals) total += mixture_cdf(m_, iv.hi) - mixture_cdf(m_, iv.lo);
        return total;
    }

private:
    double level_gap(double x, double cut) const { return log_density(m_, x) - cut; }

    double left_tail(double mode, double cut) const {
        double step = sd_max_;
        double x = mode - step;
        while (level_gap(x, cut) >= 0.0) {
            step *= 2.0;
            x = mode - step;
        }
        return numerics::find_root([&](double t) { return level_gap(t, cut); }, x, mode, x_tol_);
    }

    double right_tail(double mode, double cut) const {
        double step = sd_max_;
        double x = mode + step;
        while (level_gap(x, cut) >= 0.0) {
            step *= 2.0;
            x = mode + step;
        }
        return numerics::find_root([&](double t) { return level_gap(t, cut); }, mode, x, x_tol_);
    }

    // Root on a monotone stretch between two stationary points.
    double between(double a, double b, double cut) const {
        return numerics::find_root([&](double t) { return level_gap(t, cut); }, a, b, x_tol_);
    }

    const TwoComponentNormalMixture& m_;
    std::vector<double> critical_;
    std::vector<double> log_critical_;
    double sd_max_;
    double x_tol_;
};

}  // namespace

double HpdiSet::total_length() const noexcept {
    double total = 0.0;
    for (const auto& iv : intervals) total += iv.length();
    return total;
}

bool HpdiSet::contains(double x) const noexcept {
    return std::any_of(intervals.begin(), intervals.end(), [x](const Interval& iv) { return iv.contains(x); });
}

double mixture_cdf(const TwoComponentNormalMixture& m, double x) {
    const double w = m.weight_informative();
    double total = 0.0;
    if (w > 0.0) total += w * numerics::normal_cdf(x, m.mean_informative(), m.var_informative());
    if (w < 1.0) total += (1.0 - w) * numerics::normal_cdf(x, m.mean_vague(), m.var_vague());
    return std::clamp(total, 0.0, 1.0);
}

double posterior_quantile(const TwoComponentNormalMixture& m, double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile probability must lie in (0, 1)");
    auto [lo, hi] = m.support_span(8.0);
    const double sd = sd_max_of(m);
    while (mixture_cdf(m, lo) > p) lo -= 8.0 * sd;
    while (mixture_cdf(m, hi) < p) hi += 8.0 * sd;
    return numerics::find_root([&](double x) { return mixture_cdf(m, x) - p; }, lo, hi, 1e-14 * sd_min_of(m),
                               1e-12);
}

std::vector<double> critical_points(const TwoComponentNormalMixture& m) {
    const bool single = m.is_degenerate() || m.mean_informative() == m.mean_vague();
    if (single) return {m.weight_informative() > 0.0 ? m.mean_informative() : m.mean_vague()};

    // Every stationary point lies between the two component means. The
    // derivative is scaled by the density itself so its sign survives underflow.
    const double a = std::min(m.mean_informative(), m.mean_vague());
    const double b = std::max(m.mean_informative(), m.mean_vague());
    auto slope = [&m](double x) { return m.scaled_derivative(x, m.log_density(x).value); };
    const double step = std::min(sd_min_of(m) / 10.0, (b - a) / 1000.0);
    const int n = static_cast<int>(std::min<double>(std::ceil((b - a) / step), kMaxCriticalGrid));

    std::vector<double> roots;
    double prev_x = a;
    int prev_sign = 1;  // the density increases at the lower mean
    for (int i = 1; i <= n; ++i) {
        const double x = i == n ? b : a + (b - a) * i / n;
        const double g = slope(x);
        int sign = g > 0.0 ? 1 : (g < 0.0 ? -1 : 0);
        if (i == n && sign == 0) sign = -1;
        if (sign == 0) continue;
        if (sign != prev_sign) {
            roots.push_back(numerics::find_root(slope, prev_x, x, 1e-13 * std::max(1.0, std::abs(x))));
        }
        prev_x = x;
        prev_sign = sign;
    }
    if (roots.empty()) {
        // Grid too coarse to see the crossing; fall back to the higher endpoint.
        roots.push_back(m.log_density(a).value >= m.log_density(b).value ? a : b);
    }
    return roots;
}

int mode_count(const TwoComponentNormalMixture& m) {
    return static_cast<int>((critical_points(m).size() + 1) / 2);
}

HpdiSet hpdi(const TwoComponentNormalMixture& m, double level, HpdiOptions options) {
    if (!(level > 0.0 && level < 1.0)) throw DomainError("HPDI level must lie in (0, 1)");
    const LevelSets sets(m);
    const double top = sets.log_peak();
    const double bottom = top - kCutSearchDepth;
    auto excess = [&](double cut) { return sets.mass(sets.region(cut)) - level; };
    if (excess(bottom) < 0.0) throw NumericError("HPDI level too close to one for the density cut search", bottom);

    const double cut = numerics::find_root(excess, bottom, top, 1e-13, 1e-13);
    HpdiSet out;
    out.level = level;
    out.intervals = sets.region(cut);
    out.attained_mass = sets.mass(out.intervals);
    out.density_cut = std::exp(cut);
    if (options.force_interval && out.intervals.size() > 1) {
        out.intervals = {{out.intervals.front().lo, out.intervals.back().hi}};
        out.attained_mass = sets.mass(out.intervals);
        out.forced_hull = true;
    }
    return out;
}

DensityGrid density_grid(const TwoComponentNormalMixture& m, double lo, double hi, int n,
                         std::map<std::string, std::string> metadata) {
    if (!(lo < hi)) throw DomainError("density grid requires lo < hi");
    if (n < 2) throw DomainError("density grid requires at least two points");
    DensityGrid grid;
    grid.points.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
        grid.points.emplace_back(x, m.density(x));
    }
    grid.metadata = std::move(metadata);
    return grid;
}

std::string to_string(TippingRegime regime) {
    switch (regime) {
        case TippingRegime::always_excludes: return "always_excludes";
        case TippingRegime::never_excludes: return "never_excludes";
        case TippingRegime::crossing: return "crossing";
    }
    return "unknown";
}

TippingPointResult tipping_point(const StudySummary& original, const StudySummary& rep,
                                 const VagueComponent& vague, const TippingOptions& options) {
    if (!(options.grid_step > 0.0 && options.grid_step <= 1.0)) throw DomainError("grid step must lie in (0, 1]");
    if (!(options.tolerance > 0.0)) throw DomainError("tipping tolerance must be positive");

    auto evaluate = [&](double omega) {
        const auto posterior = update_fixed(build_prior(original, vague, FixedWeight(omega)), rep);
        auto region = hpdi(posterior, options.level);
        const bool excludes = !region.contains(options.threshold);
        return TippingTracePoint{omega, posterior_median(posterior), std::move(region), excludes};
    };

    const int steps = static_cast<int>(std::lround(1.0 / options.grid_step));
    TippingPointResult result;
    result.trace.reserve(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) {
        result.trace.push_back(evaluate(i == steps ? 1.0 : static_cast<double>(i) / steps));
    }

    std::optional<double> first_entry;
    for (std::size_t i = 0; i + 1 < result.trace.size(); ++i) {
        const bool left = result.trace[i].excludes_threshold;
        if (left == result.trace[i + 1].excludes_threshold) continue;
        double lo = result.trace[i].omega;
        double hi = result.trace[i + 1].omega;
        while (hi - lo > options.tolerance) {
            const double mid = 0.5 * (lo + hi);
            (evaluate(mid).excludes_threshold == left ? lo : hi) = mid;
        }
        const double crossing = 0.5 * (lo + hi);
        result.crossings.push_back(crossing);
        if (!left && !first_entry) first_entry = crossing;
    }
    result.monotone = result.crossings.size() <= 1;

    if (result.trace.front().excludes_threshold) {
        result.regime = TippingRegime::always_excludes;
        result.omega_star = 0.0;
    } else if (first_entry) {
        result.regime = TippingRegime::crossing;
        result.omega_star = first_entry;
    } else {
        result.regime = TippingRegime::never_excludes;
    }
    return result;
}

}  // namespace repmix
