#include <gtest/gtest.h>

#include <repmix/errors.hpp>
#include <repmix/summaries.hpp>

#include "oracles.hpp"

#include <cmath>

namespace {

using namespace repmix;

const StudySummary kOriginal("original", 0.21, 0.05);
const StudySummary kRep1("1", 0.09, 0.05);
const StudySummary kRep2("2", 0.21, 0.06);
const StudySummary kRep3("3", 0.44, 0.04);
const VagueComponent kVague;

TwoComponentNormalMixture posterior(const StudySummary& rep, double omega) {
    return update_fixed(build_prior(kOriginal, kVague, FixedWeight(omega)), rep);
}

const TwoComponentNormalMixture kBimodal(0.5, {-5.0, 0.01}, {5.0, 0.01});

TEST(Median, Rep1HalfWeight) {
    EXPECT_NEAR(posterior_median(posterior(kRep1, 0.5)), 0.14329312, 1e-7);
}

TEST(Median, SingleNormalAndSymmetricBimodal) {
    EXPECT_NEAR(posterior_median(TwoComponentNormalMixture::single(0.3, 0.04)), 0.3, 1e-12);
    const double med = posterior_median(kBimodal);
    EXPECT_NEAR(mixture_cdf(kBimodal, med), 0.5, 1e-12);
    EXPECT_GT(med, -4.0);
    EXPECT_LT(med, 4.0);
}

TEST(Quantile, RejectsEndpoints) {
    const auto m = TwoComponentNormalMixture::single(0, 1);
    EXPECT_THROW(posterior_quantile(m, 0.0), DomainError);
    EXPECT_THROW(posterior_quantile(m, 1.0), DomainError);
}

TEST(Quantile, InvertsCdfProperty) {
    oracle::Rng rng(41);
    for (int i = 0; i < 100; ++i) {
        const TwoComponentNormalMixture m(rng.uniform(0, 1), {rng.uniform(-3, 3), rng.uniform(1e-4, 2)},
                                          {rng.uniform(-3, 3), rng.uniform(1e-4, 2)});
        for (double p : {0.001, 0.025, 0.3, 0.5, 0.8, 0.975, 0.999}) {
            EXPECT_NEAR(mixture_cdf(m, posterior_quantile(m, p)), p, 1e-10);
        }
    }
}

TEST(Modes, UnimodalAndBimodal) {
    EXPECT_EQ(mode_count(TwoComponentNormalMixture::single(1, 1)), 1);
    EXPECT_EQ(mode_count(posterior(kRep1, 0.5)), 1);
    EXPECT_EQ(mode_count(kBimodal), 2);
    const auto cps = critical_points(kBimodal);
    ASSERT_EQ(cps.size(), 3u);
    EXPECT_NEAR(cps[0], -5.0, 1e-9);
    EXPECT_NEAR(cps[1], 0.0, 1e-9);
    EXPECT_NEAR(cps[2], 5.0, 1e-9);
}

TEST(Modes, AsymmetricBimodal) {
    const TwoComponentNormalMixture m(0.2, {0.0, 0.01}, {1.0, 0.01});
    EXPECT_EQ(mode_count(m), 2);
    const TwoComponentNormalMixture close(0.5, {0.0, 1.0}, {1.0, 1.0});
    EXPECT_EQ(mode_count(close), 1);
}

TEST(Hpdi, Rep1HalfWeight) {
    const auto r = hpdi(posterior(kRep1, 0.5));
    ASSERT_EQ(r.intervals.size(), 1u);
    EXPECT_NEAR(r.intervals[0].lo, 0.0461, 1e-4);
    EXPECT_NEAR(r.intervals[0].hi, 0.2242, 1e-4);
    EXPECT_NEAR(r.attained_mass, 0.95, 1e-9);
}

TEST(Hpdi, Rep3HalfWeight) {
    const auto r = hpdi(posterior(kRep3, 0.5));
    ASSERT_EQ(r.intervals.size(), 1u);
    EXPECT_NEAR(r.intervals[0].lo, 0.35, 5e-3);
    EXPECT_NEAR(r.intervals[0].hi, 0.52, 5e-3);
}

TEST(Hpdi, ZeroWeightIsCentralNormalInterval) {
    const auto post = posterior(kRep1, 0.0);
    const auto r = hpdi(post);
    ASSERT_EQ(r.intervals.size(), 1u);
    EXPECT_NEAR(r.intervals[0].hi, 0.187825, 1e-6);
    const double half = 1.959963984540054 * std::sqrt(post.var_vague());
    EXPECT_NEAR(r.intervals[0].lo, post.mean_vague() - half, 1e-9);
    EXPECT_NEAR(r.intervals[0].hi, post.mean_vague() + half, 1e-9);
}

TEST(Hpdi, BimodalIsTwoIntervals) {
    const auto r = hpdi(kBimodal);
    ASSERT_EQ(r.intervals.size(), 2u);
    EXPECT_TRUE(r.is_disjoint());
    EXPECT_NEAR(r.attained_mass, 0.95, 1e-6);
    EXPECT_TRUE(r.contains(-5.0));
    EXPECT_TRUE(r.contains(5.0));
    EXPECT_FALSE(r.contains(0.0));
    const double half = 1.959963984540054 * 0.1;
    EXPECT_NEAR(r.intervals[0].length(), 2 * half, 1e-8);

    const auto hull = hpdi(kBimodal, 0.95, {.force_interval = true});
    ASSERT_EQ(hull.intervals.size(), 1u);
    EXPECT_TRUE(hull.forced_hull);
    EXPECT_EQ(hull.intervals[0].lo, r.intervals[0].lo);
    EXPECT_EQ(hull.intervals[1 - 1].hi, r.intervals[1].hi);
    EXPECT_GT(hull.attained_mass, 0.95);
}

TEST(Hpdi, RejectsBadLevel) {
    const auto m = TwoComponentNormalMixture::single(0, 1);
    EXPECT_THROW(hpdi(m, 0.0), DomainError);
    EXPECT_THROW(hpdi(m, 1.0), DomainError);
}

TEST(HpdiProperty, MassShortnessAndEqualDensityEnds) {
    oracle::Rng rng(42);
    for (int i = 0; i < 60; ++i) {
        const TwoComponentNormalMixture m(rng.uniform(0, 1), {rng.uniform(-2, 2), rng.uniform(1e-3, 1)},
                                          {rng.uniform(-2, 2), rng.uniform(1e-3, 1)});
        const double level = rng.uniform(0.5, 0.99);
        const auto r = hpdi(m, level);
        EXPECT_NEAR(r.attained_mass, level, 1e-6);
        for (const auto& iv : r.intervals) {
            EXPECT_NEAR(m.density(iv.lo), r.density_cut, 1e-7 * std::max(1.0, r.density_cut));
            EXPECT_NEAR(m.density(iv.hi), r.density_cut, 1e-7 * std::max(1.0, r.density_cut));
        }
        // never longer than the equal-tailed interval
        const double central = posterior_quantile(m, 0.5 + level / 2) - posterior_quantile(m, 0.5 - level / 2);
        EXPECT_LE(r.total_length(), central * (1 + 1e-9));
        // and no shorter than the grid-optimal region (up to grid resolution)
        const auto [lo, hi] = m.support_span(8.0);
        const int cells = 200000;
        const double grid = oracle::grid_hpd_length([&](double x) { return m.density(x); }, lo, hi, cells, level);
        EXPECT_NEAR(r.total_length(), grid, 4 * (hi - lo) / cells);
    }
}

TEST(DensityGrid, Basics) {
    const auto g = density_grid(kBimodal, -6, 6, 13, {{"omega", "0.5"}});
    ASSERT_EQ(g.points.size(), 13u);
    EXPECT_EQ(g.points.front().first, -6.0);
    EXPECT_EQ(g.points.back().first, 6.0);
    EXPECT_NEAR(g.points[1].second, kBimodal.density(-5.0), 1e-12);
    EXPECT_EQ(g.metadata.at("omega"), "0.5");
    EXPECT_THROW(density_grid(kBimodal, 1, 0, 10), DomainError);
    EXPECT_THROW(density_grid(kBimodal, 0, 1, 1), DomainError);
}

TEST(TippingPoint, LabelsReplications) {
    const auto r1 = tipping_point(kOriginal, kRep1, kVague);
    EXPECT_EQ(r1.regime, TippingRegime::crossing);
    ASSERT_TRUE(r1.omega_star);
    EXPECT_GE(*r1.omega_star, 0.05);
    EXPECT_LE(*r1.omega_star, 0.15);
    EXPECT_TRUE(r1.monotone);
    EXPECT_EQ(r1.trace.size(), 101u);

    const StudySummary pooled = round_summary(pool(std::vector{kRep1, kRep2, kRep3}), 2);
    for (const auto& rep : {kRep2, kRep3, pooled}) {
        const auto r = tipping_point(kOriginal, rep, kVague);
        EXPECT_EQ(r.regime, TippingRegime::always_excludes) << rep.label();
        EXPECT_EQ(r.omega_star, 0.0);
    }
}

TEST(TippingPoint, NeverExcludes) {
    const auto r = tipping_point(StudySummary("o", 0.0, 0.1), StudySummary("r", 0.0, 0.1), kVague);
    EXPECT_EQ(r.regime, TippingRegime::never_excludes);
    EXPECT_FALSE(r.omega_star);
    EXPECT_EQ(to_string(r.regime), "never_excludes");
}

TEST(TippingPoint, CrossingIsBracketed) {
    const auto r = tipping_point(kOriginal, kRep1, kVague);
    const double w = *r.omega_star;
    auto excludes = [&](double omega) {
        return !hpdi(posterior(kRep1, omega)).contains(0.0);
    };
    EXPECT_FALSE(excludes(w - 1e-4));
    EXPECT_TRUE(excludes(w + 1e-4));
}

TEST(TippingPoint, RejectsBadOptions) {
    EXPECT_THROW(tipping_point(kOriginal, kRep1, kVague, {.grid_step = 0.0}), DomainError);
    EXPECT_THROW(tipping_point(kOriginal, kRep1, kVague, {.tolerance = -1.0}), DomainError);
}

}  // namespace
