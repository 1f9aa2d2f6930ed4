#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "errsum/decision.hpp"

using namespace errsum;

TEST(Decide, PublishedVerdicts) {
    const auto mild = decide(std::log(0.366), ErrorWeights(1, 1));
    EXPECT_EQ(mild.verdict, Verdict::reject_h0);
    EXPECT_EQ(mild.grade.grade, 1);
    EXPECT_EQ(mild.grade.direction, EvidenceDirection::against_h0);
    EXPECT_EQ(mild.grade.label, "Mild Evidence against H0");

    EXPECT_EQ(decide(std::log(18.7), ErrorWeights(1, 1)).verdict, Verdict::accept_h0);
    EXPECT_EQ(decide(0.0, ErrorWeights(1, 1)).verdict, Verdict::indifferent);
}

TEST(Decide, TieTolerance) {
    const ErrorWeights w(2.0, 3.0);
    const double t = std::log(1.5);
    EXPECT_EQ(decide(t + 0.5e-12, w).verdict, Verdict::indifferent);
    EXPECT_EQ(decide(t - 0.5e-12, w).verdict, Verdict::indifferent);
    EXPECT_EQ(decide(t + 1e-9, w).verdict, Verdict::accept_h0);
    EXPECT_EQ(decide(t - 1e-9, w).verdict, Verdict::reject_h0);
}

TEST(Decide, RejectsBadInput) {
    EXPECT_THROW(ErrorWeights(0.0, 1.0), domain_error);
    EXPECT_THROW(ErrorWeights(1.0, -2.0), domain_error);
    EXPECT_THROW((void)decide(NAN, ErrorWeights(1, 1)), domain_error);
}

TEST(Decide, ScaleInvariance) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = std::exp(u(rng));
        const double b = std::exp(u(rng));
        const double c = std::exp(u(rng));
        const double lr = std::log(b / a) + u(rng) * (i % 2 ? 1e-3 : 1.0);
        const ErrorWeights w(a, b);
        const ErrorWeights wc(c * a, c * b);
        // Scaling may move ln(b/a) by a few ulps; only compare away from the tie band.
        if (std::abs(lr - w.log_ratio()) < 1e-11) continue;
        EXPECT_EQ(decide(lr, w).verdict, decide(lr, wc).verdict) << i;
    }
}

TEST(Decide, SingleCrossing) {
    const ErrorWeights w(1.0, 0.63);
    int changes = 0;
    Verdict prev = decide(-5.0, w).verdict;
    EXPECT_EQ(prev, Verdict::reject_h0);
    for (double lr = -5.0; lr <= 5.0; lr += 0.001) {
        const auto v = decide(lr, w).verdict;
        if (v != prev && v != Verdict::indifferent) ++changes;
        prev = v;
    }
    EXPECT_EQ(changes, 1);
    EXPECT_EQ(prev, Verdict::accept_h0);
}

TEST(Grade, AgainstTable) {
    EXPECT_EQ(jeffreys_grade(0.9).grade, 1);
    EXPECT_EQ(jeffreys_grade(0.2).grade, 2);
    EXPECT_EQ(jeffreys_grade(0.05).grade, 4);
    EXPECT_EQ(jeffreys_grade(0.02).grade, 5);
    EXPECT_EQ(jeffreys_grade(0.005).grade, 6);
    EXPECT_EQ(jeffreys_grade(0.005).label, "Decisive Evidence against H0");
    EXPECT_EQ(jeffreys_grade(1.0).grade, 0);
    EXPECT_EQ(jeffreys_grade(1.0).label, "Null Supported");
}

TEST(Grade, EdgesBelongToStrongerGrade) {
    EXPECT_EQ(jeffreys_grade(std::pow(10.0, -0.5)).grade, 2);
    EXPECT_EQ(jeffreys_grade(0.1).grade, 4);
    EXPECT_EQ(jeffreys_grade(std::pow(10.0, -1.5)).grade, 5);
    EXPECT_EQ(jeffreys_grade(0.01).grade, 6);
    EXPECT_EQ(jeffreys_grade(std::nextafter(0.1, 1.0)).grade, 2);
}

TEST(Grade, MirroredForLargeRatios) {
    const auto g = jeffreys_grade(219.66);
    EXPECT_EQ(g.direction, EvidenceDirection::for_h0);
    EXPECT_TRUE(g.mirrored);
    EXPECT_EQ(g.grade, 6);
    EXPECT_EQ(g.contiguous_grade(), 5);
    EXPECT_EQ(jeffreys_grade(2.0).label, "Null Supported");
}

TEST(Grade, ReciprocalSymmetry) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int i = 0; i < 2000; ++i) {
        const double lr = u(rng);
        if (lr == 0.0) continue;
        const auto g = jeffreys_grade_log(lr);
        const auto h = jeffreys_grade_log(-lr);
        EXPECT_EQ(g.grade, h.grade) << lr;
        EXPECT_NE(g.direction, h.direction) << lr;
    }
}

TEST(Grade, ExtremeLogRatios) {
    EXPECT_EQ(jeffreys_grade_log(-5000.0).grade, 6);
    EXPECT_EQ(jeffreys_grade_log(5000.0).grade, 6);
    EXPECT_THROW((void)jeffreys_grade(0.0), domain_error);
}

TEST(Elicit, Ratios) {
    EXPECT_DOUBLE_EQ(elicit_ratio(0.5, 1, 1), 1.0);
    EXPECT_DOUBLE_EQ(elicit_ratio(0.5, 0.63, 1), 0.63);
    EXPECT_DOUBLE_EQ(elicit_ratio(0.75, 1, 1), 1.0 / 3.0);
    EXPECT_THROW((void)elicit_ratio(0.0, 1, 1), domain_error);
    EXPECT_THROW((void)elicit_ratio(1.0, 1, 1), domain_error);
    EXPECT_THROW((void)elicit_ratio(0.5, 0, 1), domain_error);
}
