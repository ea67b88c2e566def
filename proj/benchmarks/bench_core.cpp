#include <benchmark/benchmark.h>

#include <repmix/bayes_factors.hpp>
#include <repmix/summaries.hpp>

namespace {

using namespace repmix;

const StudySummary kOriginal("original", 0.21, 0.05);
const StudySummary kRep1("1", 0.09, 0.05);
const VagueComponent kVague;

void BM_UpdateFixed(benchmark::State& state) {
    const auto prior = build_prior(kOriginal, kVague, FixedWeight(0.5));
    for (auto _ : state) benchmark::DoNotOptimize(update_fixed(prior, kRep1));
}
BENCHMARK(BM_UpdateFixed);

void BM_BayesFactors(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(bf_dc_point(kRep1, kOriginal, kVague));
        benchmark::DoNotOptimize(bf_dc_beta(kRep1, kOriginal, kVague));
        benchmark::DoNotOptimize(bf_01_mixture(kRep1, kOriginal, kVague));
    }
}
BENCHMARK(BM_BayesFactors);

void BM_Median(benchmark::State& state) {
    const auto post = update_fixed(build_prior(kOriginal, kVague, FixedWeight(0.5)), kRep1);
    for (auto _ : state) benchmark::DoNotOptimize(posterior_median(post));
}
BENCHMARK(BM_Median);

void BM_HpdiUnimodal(benchmark::State& state) {
    const auto post = update_fixed(build_prior(kOriginal, kVague, FixedWeight(0.5)), kRep1);
    for (auto _ : state) benchmark::DoNotOptimize(hpdi(post));
}
BENCHMARK(BM_HpdiUnimodal);

void BM_HpdiBimodal(benchmark::State& state) {
    const TwoComponentNormalMixture m(0.5, {-5.0, 0.01}, {5.0, 0.01});
    for (auto _ : state) benchmark::DoNotOptimize(hpdi(m));
}
BENCHMARK(BM_HpdiBimodal);

void BM_TippingPoint(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(tipping_point(kOriginal, kRep1, kVague));
}
BENCHMARK(BM_TippingPoint)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
