#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "errsum/verification/consistency.hpp"

using namespace errsum;

namespace {

double phi_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double phi_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

// Cutoff on |ybar - theta0| where the ratio crosses ln r, found by bisection
// on the ratio itself rather than on a rearranged form.
template <class Rule>
double bisect_cutoff(Rule reject, const TwoSidedSetting& s, std::int64_t n) {
    double lo = 0.0;
    double hi = 100.0 * s.sigma;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (reject(NormalSummary{s.theta0 + mid, n, s.sigma}) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

// Composite Simpson on [a, b].
template <class F>
double simpson(F f, double a, double b, int m) {
    const double h = (b - a) / m;
    double s = f(a) + f(b);
    for (int i = 1; i < m; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

TEST(ClosedForm, IntrinsicAgainstBisectedCutoff) {
    const TwoSidedSetting s;
    for (std::int64_t n : {10, 100, 1000, 10000}) {
        const double d = bisect_cutoff(IntrinsicRule{s}, s, n);
        const double se = s.sigma / std::sqrt(static_cast<double>(n));
        const double alpha = 2.0 * (1.0 - phi_cdf(d / se));
        // Marginal sd of ybar under the alternative: sigma sqrt(2 + 1/n).
        const double beta = 2.0 * phi_cdf(d / (s.sigma * std::sqrt(2.0 + 1.0 / n))) - 1.0;
        const auto p = profile_intrinsic(n, s);
        EXPECT_NEAR(p.alpha, alpha, 1e-9 * std::max(alpha, 1e-3)) << n;
        EXPECT_NEAR(p.beta, beta, 1e-9) << n;
    }
}

TEST(ClosedForm, TwoPointAgainstBisectedCutoff) {
    const TwoSidedSetting s;
    for (std::int64_t n : {10, 50, 100, 400}) {
        const double d = bisect_cutoff(TwoPointRule{s}, s, n);
        const double se = s.sigma / std::sqrt(static_cast<double>(n));
        const double alpha = 2.0 * (1.0 - phi_cdf(d / se));
        const double inside = phi_cdf((d - s.delta) / se) - phi_cdf((-d - s.delta) / se);
        const auto p = profile_two_point(n, s);
        EXPECT_NEAR(p.alpha / alpha, 1.0, 1e-8) << n;
        EXPECT_NEAR(p.beta / inside, 1.0, 1e-8) << n;
    }
}

TEST(ClosedForm, IndifferenceAgainstSimpson) {
    const TwoSidedSetting s;
    const double tau = std::sqrt(2.0) * s.sigma;
    for (std::int64_t n : {10, 100, 1000}) {
        const double d = bisect_cutoff(IndifferenceRule{s}, s, n);
        EXPECT_NEAR(indifference_cutoff(n, s), d, 1e-10) << n;
        const double se = s.sigma / std::sqrt(static_cast<double>(n));
        auto prior = [&](double th) { return phi_pdf(th / tau) / tau; };
        auto outside = [&](double th) { return 1.0 - (phi_cdf((d - th) / se) - phi_cdf((-d - th) / se)); };
        auto inside = [&](double th) { return phi_cdf((d - th) / se) - phi_cdf((-d - th) / se); };
        const double p0 = 2.0 * phi_cdf(s.delta / tau) - 1.0;
        const double alpha =
            simpson([&](double th) { return prior(th) * outside(th); }, -s.delta, s.delta, 200000) / p0;
        const double tail = simpson([&](double th) { return prior(th) * inside(th); }, s.delta, 20.0 * tau, 400000);
        const double beta = 2.0 * tail / (1.0 - p0);
        const auto p = profile_indifference(n, s);
        EXPECT_NEAR(p.alpha, alpha, 1e-7) << n;
        EXPECT_NEAR(p.beta, beta, 1e-7) << n;
    }
}

TEST(ClosedForm, FixedAlphaControlHoldsAlpha) {
    for (std::int64_t n : default_consistency_grid()) EXPECT_EQ(profile_fixed_alpha_control(n).alpha, 0.05);
}

TEST(ClosedForm, AgreesWithMonteCarlo) {
    const TwoSidedSetting s;
    for (const auto test : {NormalTest::intrinsic, NormalTest::two_point, NormalTest::indifference,
                            NormalTest::fixed_alpha_control}) {
        for (std::int64_t n : {10, 100}) {
            const auto exact = closed_form_profile(test, n, s);
            const auto est = mc_profile(test, n, s, MonteCarloConfig{100'000, 11, 2});
            const double floor = 1e-5;
            EXPECT_LE(std::abs(est.profile.alpha - exact.alpha), 4.0 * std::max(est.alpha_se, floor))
                << to_string(test) << " " << n;
            EXPECT_LE(std::abs(est.profile.beta - exact.beta), 4.0 * std::max(est.beta_se, floor))
                << to_string(test) << " " << n;
        }
    }
}

TEST(Sweep, TwoPointTypeTwoDecaysGeometrically) {
    const TwoSidedSetting s;
    const double l100 = std::log(profile_two_point(100, s).beta);
    const double l200 = std::log(profile_two_point(200, s).beta);
    const double l400 = std::log(profile_two_point(400, s).beta);
    // ln beta is close to linear in n.
    EXPECT_NEAR((l400 - l200) / (l200 - l100), 2.0, 0.2);
    const auto a = assess_consistency(consistency_sweep(NormalTest::two_point, default_consistency_grid(), s));
    EXPECT_TRUE(a.consistent());
}

TEST(Sweep, IntrinsicErrorsShrink) {
    const auto rows = consistency_sweep(NormalTest::intrinsic, default_consistency_grid());
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_LT(rows[i].profile.alpha, rows[i - 1].profile.alpha);
        EXPECT_LT(rows[i].profile.beta, rows[i - 1].profile.beta);
    }
    const auto a = assess_consistency(rows);
    EXPECT_TRUE(a.alpha_decreasing);
    EXPECT_TRUE(a.beta_decreasing);
}

TEST(Sweep, FixedAlphaControlIsNotConsistent) {
    const auto a = assess_consistency(consistency_sweep(NormalTest::fixed_alpha_control, default_consistency_grid()));
    EXPECT_FALSE(a.alpha_below);
    EXPECT_FALSE(a.consistent());
    EXPECT_EQ(a.final_alpha, 0.05);
}

TEST(Assess, SyntheticRows) {
    const std::vector<ConsistencyRow> good = {{1, {0.1, 0.2, 0.3}}, {2, {0.01, 0.02, 0.03}}, {3, {1e-4, 2e-4, 3e-4}}};
    EXPECT_TRUE(assess_consistency(good).consistent());
    const std::vector<ConsistencyRow> rising = {{1, {0.1, 0.2, 0.3}}, {2, {1e-4, 2e-4, 3e-4}}, {3, {2e-4, 1e-4, 3e-4}}};
    const auto a = assess_consistency(rising);
    EXPECT_FALSE(a.alpha_decreasing);
    EXPECT_TRUE(a.beta_decreasing);
    EXPECT_THROW((void)assess_consistency(std::vector<ConsistencyRow>{}), domain_error);
    const std::vector<std::int64_t> bad = {0};
    EXPECT_THROW((void)consistency_sweep(NormalTest::intrinsic, bad), domain_error);
}

TEST(Setting, Validation) {
    EXPECT_THROW((void)profile_intrinsic(10, TwoSidedSetting{0.0, 0.0, 1.0, 1.0}), domain_error);
    EXPECT_THROW((void)profile_two_point(10, TwoSidedSetting{0.0, 1.0, 0.0, 1.0}), domain_error);
    EXPECT_THROW((void)profile_indifference(10, TwoSidedSetting{0.0, 1.0, 1.0, -1.0}), domain_error);
}
