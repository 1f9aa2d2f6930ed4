#include <gtest/gtest.h>

#include <cmath>

#include "errsum/design.hpp"
#include "errsum/verification/consistency.hpp"
#include "errsum/verification/lemma2.hpp"
#include "errsum/verification/monte_carlo.hpp"

using namespace errsum;

namespace {

NormalMeanModel example_model(std::int64_t n) {
    return NormalMeanModel(3.0, n, weight::PointMass{-1.0}, weight::PointMass{1.0});
}

}  // namespace

TEST(MonteCarlo, IdenticalAcrossWorkerCounts) {
    const DesignSpec spec;
    const double cut = degroot_threshold(20, spec, 0.63);
    auto rule = [cut](const NormalSummary& d) { return d.mean > cut; };
    // 50 000 trials is 13 blocks, so every worker count gets uneven shares.
    const auto ref = mc_error_profile(rule, example_model(20), MonteCarloConfig{50'000, 42, 1});
    for (unsigned w : {2U, 3U, 7U, 16U}) {
        const auto est = mc_error_profile(rule, example_model(20), MonteCarloConfig{50'000, 42, w});
        EXPECT_EQ(est.rejections_under_h0, ref.rejections_under_h0) << w;
        EXPECT_EQ(est.acceptances_under_h1, ref.acceptances_under_h1) << w;
        EXPECT_EQ(est.profile.alpha, ref.profile.alpha);
        EXPECT_EQ(est.profile.beta, ref.profile.beta);
    }
}

TEST(MonteCarlo, SeedChangesTheStream) {
    auto rule = [](const NormalSummary& d) { return d.mean > 0.0; };
    const auto a = mc_error_profile(rule, example_model(5), MonteCarloConfig{20'000, 1, 1});
    const auto b = mc_error_profile(rule, example_model(5), MonteCarloConfig{20'000, 2, 1});
    EXPECT_NE(a.rejections_under_h0, b.rejections_under_h0);
}

TEST(MonteCarlo, ExampleDesignWithinThreeStandardErrors) {
    const DesignSpec spec;
    const auto design = design_simple_normal(spec);
    const double cut = degroot_threshold(20, spec, design.implicit_ratio);
    const auto exact = error_profile_degroot(20, spec, design.implicit_ratio);
    EXPECT_NEAR(exact.alpha, 0.05, 1e-9);
    EXPECT_NEAR(exact.beta, 0.091, 0.001);
    const auto est = mc_error_profile([cut](const NormalSummary& d) { return d.mean > cut; }, example_model(20),
                                      MonteCarloConfig{1'000'000, 20130530, 4});
    EXPECT_LE(std::abs(est.profile.alpha - exact.alpha), 3.0 * est.alpha_se);
    EXPECT_LE(std::abs(est.profile.beta - exact.beta), 3.0 * est.beta_se);
}

TEST(MonteCarlo, AlwaysAccept) {
    const auto est = mc_error_profile([](const NormalSummary&) { return false; }, example_model(3),
                                      MonteCarloConfig{5000, 9, 2});
    EXPECT_EQ(est.profile.alpha, 0.0);
    EXPECT_EQ(est.profile.beta, 1.0);
    EXPECT_EQ(est.alpha_se, 0.0);
}

TEST(MonteCarlo, IntrinsicRuleSatisfiesErrorRatioBounds) {
    const TwoSidedSetting s{0.0, 3.0, 1.0, 1.0};
    const auto est = mc_profile(NormalTest::intrinsic, 50, s, MonteCarloConfig{100'000, 77, 2});
    const auto rep = check_lemma2(est.profile, 1.0, est.alpha_se, est.beta_se);
    EXPECT_TRUE(rep.holds()) << rep.ratio_margin << " " << rep.slack;
}

TEST(MonteCarlo, BinomialModelMean) {
    const BinomialModel m(40, weight::PointMass{0.25}, weight::Beta{2.0, 2.0});
    auto rng = block_engine(5, 0, 0);
    double s0 = 0.0;
    double s1 = 0.0;
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) {
        s0 += static_cast<double>(m.sample(Hypothesis::null, rng).successes);
        s1 += static_cast<double>(m.sample(Hypothesis::alternative, rng).successes);
    }
    EXPECT_NEAR(s0 / draws, 10.0, 0.1);
    EXPECT_NEAR(s1 / draws, 20.0, 0.2);
}

TEST(MonteCarlo, RefusesImproperOrUnresolvedWeights) {
    EXPECT_THROW(NormalMeanModel(1.0, 5, weight::ImproperReference{}, weight::PointMass{1.0}), domain_error);
    EXPECT_THROW(NormalMeanModel(1.0, 5, weight::DiracAtNull{}, weight::PointMass{1.0}), domain_error);
    EXPECT_THROW(BinomialModel(0, weight::PointMass{0.5}, weight::PointMass{0.6}), domain_error);
    EXPECT_THROW((void)mc_error_profile([](const NormalSummary&) { return true; }, example_model(2),
                                        MonteCarloConfig{0, 1, 1}),
                 domain_error);
}
