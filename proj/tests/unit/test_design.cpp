#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "errsum/design.hpp"

using namespace errsum;

namespace {

// Phi by erfc, independent of the library's normal routines.
double phi_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double phi_upper(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double bisect(double target, double lo = -40.0, double hi = 40.0) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (phi_cdf(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST(Design, ExampleDesignValues) {
    const DesignSpec spec;
    const auto d = design_simple_normal(spec);
    EXPECT_EQ(d.n, 20);
    EXPECT_NEAR(d.beta_achieved, 0.091, 0.001);
    EXPECT_NEAR(d.mean_threshold, 0.1034, 0.0005);
    EXPECT_NEAR(d.implicit_ratio, 0.63, 0.005);
    EXPECT_LE(d.beta_achieved, spec.beta);
}

TEST(Design, SampleSizeAgainstBisectedQuantiles) {
    const DesignSpec spec;
    const double z = bisect(0.95) + bisect(0.90);
    EXPECT_NEAR(design_simple_normal(spec).n_real, z * z * 9.0 / 4.0, 1e-9);
    const DesignSpec unit{0.0, 1.0, 1.0, 0.05, 0.1};
    EXPECT_NEAR(design_simple_normal(unit).n_real, z * z, 1e-9);
    EXPECT_NEAR(design_simple_normal(unit).n_real, 8.56, 0.01);
}

TEST(Design, EqualErrorsGiveMidpointThreshold) {
    for (double a : {0.01, 0.05, 0.2}) {
        const DesignSpec spec{-1.0, 1.0, 3.0, a, a};
        const auto d = design_simple_normal(spec);
        // The real-valued n puts the threshold exactly at the midpoint.
        EXPECT_NEAR(fixed_alpha_threshold(spec, d.n_real), 0.0, 1e-12);
    }
}

TEST(Design, MirroredHypotheses) {
    const DesignSpec up{-1.0, 1.0, 3.0, 0.05, 0.1};
    const DesignSpec down{1.0, -1.0, 3.0, 0.05, 0.1};
    const auto a = design_simple_normal(up);
    const auto b = design_simple_normal(down);
    EXPECT_EQ(a.n, b.n);
    EXPECT_NEAR(a.mean_threshold, -b.mean_threshold, 1e-12);
    EXPECT_NEAR(a.implicit_ratio, b.implicit_ratio, 1e-12);
}

TEST(Design, RejectsInvalidSpecs) {
    EXPECT_THROW((void)design_simple_normal({1.0, 1.0, 3.0, 0.05, 0.1}), domain_error);
    EXPECT_THROW((void)design_simple_normal({-1.0, 1.0, 0.0, 0.05, 0.1}), domain_error);
    EXPECT_THROW((void)design_simple_normal({-1.0, 1.0, 3.0, 0.6, 0.5}), domain_error);
    EXPECT_THROW((void)design_simple_normal({-1.0, 1.0, 3.0, 0.0, 0.5}), domain_error);
}

TEST(ImplicitRatio, MidpointGivesOne) {
    const DesignSpec spec;
    DesignResult r;
    r.n = 37;
    r.mean_threshold = spec.midpoint();
    EXPECT_DOUBLE_EQ(implicit_weight_ratio(r, spec), 1.0);
}

TEST(ImplicitRatio, RoundTripThroughThreshold) {
    for (const DesignSpec& spec : {DesignSpec{}, DesignSpec{0.0, 2.5, 1.3, 0.01, 0.2}, DesignSpec{4.0, 1.0, 2.0, 0.1, 0.05}}) {
        const auto d = design_simple_normal(spec);
        EXPECT_NEAR(degroot_threshold(d.n, spec, implicit_weight_ratio(d, spec)), d.mean_threshold, 1e-10);
    }
}

TEST(Threshold, ExampleAndLimits) {
    const DesignSpec spec;
    const double r = design_simple_normal(spec).implicit_ratio;
    EXPECT_NEAR(degroot_threshold(20, spec, r), 0.1034, 0.0005);
    EXPECT_NEAR(degroot_threshold(20, spec, 0.63), 9.0 / 40.0 * -std::log(0.63), 1e-12);
    EXPECT_NEAR(degroot_threshold(100000000, spec, r), 0.0, 1e-7);
    for (std::int64_t n : {1, 20, 1000}) EXPECT_EQ(degroot_threshold(n, spec, 1.0), 0.0);
}

TEST(Threshold, StandardizedFormAgrees) {
    // (xbar - theta0)/(sigma/sqrt n) >= K/(sigma sqrt n) + sqrt(n)|theta1 - theta0|/(2 sigma)
    const DesignSpec spec;
    const double r = design_simple_normal(spec).implicit_ratio;
    const double k = standardized_cutoff_constant(spec, r);
    for (std::int64_t n : {5, 20, 100, 5000}) {
        const double sn = std::sqrt(static_cast<double>(n));
        const double z = k / (spec.sigma * sn) + sn * spec.separation() / (2.0 * spec.sigma);
        EXPECT_NEAR(spec.theta0 + z * spec.sigma / sn, degroot_threshold(n, spec, r), 1e-10) << n;
    }
    EXPECT_NEAR(k, 2.07, 0.01);
}

TEST(FixedAlpha, ExampleProfiles) {
    const DesignSpec spec;
    const auto p100 = error_profile_fixed_alpha(100, spec);
    EXPECT_EQ(p100.alpha, 0.05);
    EXPECT_NEAR(p100.beta, 2.6e-7, 0.26e-7);
    EXPECT_NEAR(p100.alpha / p100.beta, 195217.0, 19521.7);
    EXPECT_NEAR(error_profile_fixed_alpha(10, spec).beta, 0.32, 0.005);
    EXPECT_NEAR(error_profile_fixed_alpha(20, spec).beta, 0.091, 0.001);
}

TEST(FixedAlpha, AgainstDirectFormula) {
    const DesignSpec spec;
    for (std::int64_t n : {1, 10, 20, 60}) {
        const double z = bisect(0.95) - std::sqrt(static_cast<double>(n)) * 2.0 / 3.0;
        EXPECT_NEAR(error_profile_fixed_alpha(n, spec).beta, phi_cdf(z), 1e-12) << n;
    }
}

TEST(OptimalRule, ExampleProfiles) {
    const DesignSpec spec;
    const double r = design_simple_normal(spec).implicit_ratio;
    const auto p20 = error_profile_degroot(20, spec, r);
    const auto p100 = error_profile_degroot(100, spec, r);
    EXPECT_NEAR(p20.alpha / p20.beta, 0.55, 0.01);
    EXPECT_NEAR(p100.alpha / p100.beta, 0.61, 0.01);
    EXPECT_NEAR(p100.alpha, 3.3e-4, 3.3e-4 * 0.05);
}

TEST(OptimalRule, AgainstDirectTails) {
    const DesignSpec spec;
    const double r = 0.63;
    for (std::int64_t n : {3, 20, 100, 400}) {
        const double cut = degroot_threshold(n, spec, r);
        const double se = spec.sigma / std::sqrt(static_cast<double>(n));
        const auto p = error_profile_degroot(n, spec, r);
        EXPECT_NEAR(p.alpha / phi_upper((cut - spec.theta0) / se), 1.0, 1e-9) << n;
        EXPECT_NEAR(p.beta / phi_cdf((cut - spec.theta1) / se), 1.0, 1e-9) << n;
        EXPECT_NEAR(p.serrors, p.alpha + r * p.beta, 1e-15);
    }
}

TEST(OptimalRule, ConsistentWhileFixedAlphaIsNot) {
    const DesignSpec spec;
    const double r = 0.63;
    double pa = 1.0;
    double pb = 1.0;
    for (std::int64_t n : {50, 100, 200, 400, 800, 1600}) {
        const auto p = error_profile_degroot(n, spec, r);
        EXPECT_LT(p.alpha, pa);
        EXPECT_LT(p.beta, pb);
        pa = p.alpha;
        pb = p.beta;
        EXPECT_EQ(error_profile_fixed_alpha(n, spec).alpha, spec.alpha);
    }
    EXPECT_LT(pa, 1e-20);
    EXPECT_LT(pb, 1e-20);
}

TEST(AdaptiveAlpha, MillsRatioColumns) {
    const std::array<std::int64_t, 8> grid = {1, 10, 50, 82, 100, 400, 1000, 10000};
    const auto rows = adaptive_alpha_curve(grid, 3.0);
    ASSERT_EQ(rows.size(), grid.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double x = std::sqrt(static_cast<double>(rows[i].n)) / 3.0;
        EXPECT_NEAR(rows[i].alpha_exact / phi_upper(x), 1.0, 1e-9);
        if (x > 3.0) {
            EXPECT_LT(std::abs(rows[i].alpha_mills / rows[i].alpha_exact - 1.0), 0.1) << rows[i].n;
        }
        if (i > 0) {
            EXPECT_LT(rows[i].alpha_mills, rows[i - 1].alpha_mills);
        }
    }
    EXPECT_NEAR(rows[4].alpha_exact, 4.3e-4, 0.05e-4);
}
