#pragma once

// The verification suites behind `errsum verify`, with their default grids
// and seeds. Each returns a report whose checks name the property tested.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "errsum/design.hpp"
#include "errsum/evidence.hpp"
#include "errsum/report.hpp"
#include "errsum/verification/consistency.hpp"
#include "errsum/verification/discrete.hpp"
#include "errsum/verification/lemma2.hpp"
#include "errsum/verification/matching.hpp"
#include "errsum/verification/monte_carlo.hpp"

namespace errsum {

struct SuiteOptions {
    std::uint64_t seed = 20130530;
    std::uint64_t trials = 100'000;
    unsigned workers = std::max(1U, std::thread::hardware_concurrency());
};

// ---------------------------------------------------------------------------
// Pointwise rule on finite sample spaces

/// Binomial(3) outcomes, theta = 1/2 against theta = 3/4, a = b = 1.
[[nodiscard]] inline DiscreteTestProblem binomial3_problem() {
    return DiscreteTestProblem::from_probabilities({1.0 / 8, 3.0 / 8, 3.0 / 8, 1.0 / 8},
                                                   {1.0 / 64, 9.0 / 64, 27.0 / 64, 27.0 / 64}, ErrorWeights(1.0, 1.0));
}

/// Random problem with 2..max_k outcomes; masses are normalized exponential
/// draws and r is log-uniform on [1/20, 20].
[[nodiscard]] inline DiscreteTestProblem random_discrete_problem(std::mt19937_64& rng, std::size_t max_k = 12) {
    std::uniform_int_distribution<std::size_t> size(2, max_k);
    std::exponential_distribution<double> mass(1.0);
    std::uniform_real_distribution<double> log_r(std::log(0.05), std::log(20.0));
    const std::size_t k = size(rng);
    std::vector<double> x0(k), x1(k);
    double s0 = 0.0;
    double s1 = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        s0 += x0[i] = mass(rng);
        s1 += x1[i] = mass(rng);
    }
    std::vector<double> l0(k), l1(k);
    for (std::size_t i = 0; i < k; ++i) {
        l0[i] = std::log(x0[i]) - std::log(s0);
        l1[i] = std::log(x1[i]) - std::log(s1);
    }
    return DiscreteTestProblem(std::move(l0), std::move(l1), ErrorWeights::from_ratio(std::exp(log_r(rng))));
}

struct Lemma1Summary {
    std::size_t instances = 0;
    std::size_t matches = 0;
    double max_abs_difference = 0.0;
    std::size_t lemma2_exact_holds = 0;
};

[[nodiscard]] inline Lemma1Summary run_lemma1_oracle(std::uint64_t seed, std::size_t instances = 200,
                                                     double tolerance = 1e-12) {
    std::mt19937_64 rng(seed);
    Lemma1Summary s;
    for (std::size_t i = 0; i < instances; ++i) {
        const auto p = random_discrete_problem(rng);
        const auto best = brute_force_optimal_test(p);
        const auto rule = exact_error_profile(p, lemma1_rule_discrete(p));
        const double diff = std::abs(rule.serrors - best.min_serrors);
        s.max_abs_difference = std::max(s.max_abs_difference, diff);
        s.matches += diff <= tolerance;
        s.lemma2_exact_holds += check_lemma2(rule, p.weights().ratio()).holds();
        ++s.instances;
    }
    return s;
}

[[nodiscard]] inline Report verify_lemma1(const SuiteOptions& opt = {}) {
    Report rep{"lemma1", "Pointwise rule against exhaustive search over all rejection regions", {}, {}, {}};
    const auto p = binomial3_problem();
    const auto best = brute_force_optimal_test(p);
    const auto rule_set = lemma1_rule_discrete(p);
    const auto rule = exact_error_profile(p, rule_set);
    rep.tables.push_back({"binomial3",
                          {"method", "rejection set", "alpha", "beta", "SERRORS"},
                          {{"exhaustive", Json(best.rejection_set.outcomes()).dump(), best.profile.alpha,
                            best.profile.beta, best.min_serrors},
                           {"pointwise rule", Json(rule_set.outcomes()).dump(), rule.alpha, rule.beta, rule.serrors}}});
    rep.checks.push_back(text_check("binomial3 exhaustive rejection set", "[2,3]", Json(best.rejection_set.outcomes()).dump()));
    rep.checks.push_back(absolute_check("binomial3 minimum SERRORS", 0.65625, best.min_serrors, 0.0));
    rep.checks.push_back(absolute_check("binomial3 pointwise SERRORS", 0.65625, rule.serrors, 0.0));

    const auto s = run_lemma1_oracle(opt.seed);
    rep.tables.push_back({"random",
                          {"instances", "matches", "max |SERRORS difference|", "error-ratio bounds hold exactly"},
                          {{s.instances, s.matches, s.max_abs_difference, s.lemma2_exact_holds}}});
    rep.checks.push_back(absolute_check("random problems matching the exhaustive minimum (1e-12)", 200,
                                        static_cast<double>(s.matches), 0.0));
    rep.checks.push_back(absolute_check("random problems satisfying the error-ratio bounds exactly", 200,
                                        static_cast<double>(s.lemma2_exact_holds), 0.0));
    return rep;
}

// ---------------------------------------------------------------------------
// Error-ratio bounds by simulation

struct Lemma2Instance {
    std::string description;
    McErrorProfile estimate;
    double r = 1.0;
    Lemma2Report report;
};

namespace detail {

template <class Rule, class Model>
Lemma2Instance lemma2_instance(std::string description, const Rule& rule, const Model& model, double r,
                               const MonteCarloConfig& cfg) {
    Lemma2Instance out{std::move(description), mc_error_profile(rule, model, cfg, ErrorWeights::from_ratio(r)), r, {}};
    out.report = check_lemma2(out.estimate.profile, r, out.estimate.alpha_se, out.estimate.beta_se);
    return out;
}

}  // namespace detail

/// Twenty continuous (or large discrete) instances, each run with the
/// optimal rule for its own weights.
[[nodiscard]] inline std::vector<Lemma2Instance> run_lemma2_instances(const SuiteOptions& opt) {
    std::vector<Lemma2Instance> out;
    auto cfg = [&](std::uint64_t k) { return MonteCarloConfig{opt.trials, opt.seed + 1000 * k, opt.workers}; };
    std::uint64_t k = 0;

    const DesignSpec spec;
    for (const double r : {0.1, 0.63, 1.0, 3.0}) {
        auto rule = [&spec, r](const NormalSummary& d) {
            return log_likelihood_ratio_simple_normal(d, spec.theta0, spec.theta1) < std::log(r);
        };
        out.push_back(detail::lemma2_instance("simple normal, n=20, r=" + format_cell(r), rule,
                                              NormalMeanModel(spec.sigma, 20, weight::PointMass{spec.theta0},
                                                              weight::PointMass{spec.theta1}),
                                              r, cfg(++k)));
    }
    for (const std::int64_t n : {10, 50, 200}) {
        for (const double r : {0.5, 1.0, 3.0}) {
            if (n != 50 && r == 3.0) continue;
            const TwoSidedSetting s{0.0, 3.0, 1.0, r};
            out.push_back(detail::lemma2_instance("intrinsic, n=" + std::to_string(n) + ", r=" + format_cell(r),
                                                  IntrinsicRule{s},
                                                  NormalMeanModel(3.0, n, weight::PointMass{0.0}, weight::Normal{0.0, 18.0}),
                                                  r, cfg(++k)));
        }
    }
    for (const double r : {0.5, 1.0, 2.0}) {
        const TwoSidedSetting s{0.0, 3.0, 1.0, r};
        out.push_back(detail::lemma2_instance("two-point, n=30, r=" + format_cell(r), TwoPointRule{s},
                                              NormalMeanModel(3.0, 30, weight::PointMass{0.0}, weight::TwoPointMass{0.0, 1.0}),
                                              r, cfg(++k)));
    }
    for (const double r : {0.5, 1.0}) {
        const TwoSidedSetting s{0.0, 3.0, 1.0, r};
        out.push_back(detail::lemma2_instance("indifference band, n=50, r=" + format_cell(r), IndifferenceRule{s},
                                              IndifferenceModel(s, 50), r, cfg(++k)));
    }
    for (const auto& [n, r] : {std::pair<std::int64_t, double>{20, 1.0}, {200, 0.3}, {200, 1.0}}) {
        auto rule = [r = r](const CountSummary& d) { return evidence_ratio_freeman(d.successes, d.trials).value < std::log(r); };
        out.push_back(detail::lemma2_instance("binomial, Jeffreys weight, N=" + std::to_string(n) + ", r=" + format_cell(r),
                                              rule, BinomialModel(n, weight::PointMass{0.5}, weight::Beta{0.5, 0.5}), r,
                                              cfg(++k)));
    }
    {
        const double r = 1.0;
        auto rule = [r](const CountSummary& d) {
            return log_evidence_ratio(log_evidence_binomial(d, weight::PointMass{0.5}),
                                      log_evidence_binomial(d, weight::Uniform{0.5, 1.0})) < std::log(r);
        };
        out.push_back(detail::lemma2_instance("binomial, uniform(1/2, 1) weight, N=12, r=1", rule,
                                              BinomialModel(12, weight::PointMass{0.5}, weight::Uniform{0.5, 1.0}), r,
                                              cfg(++k)));
    }
    return out;
}

[[nodiscard]] inline Report verify_lemma2(const SuiteOptions& opt = {}) {
    Report rep{"lemma2", "alpha/(1 - beta) <= b/a and alpha <= b/a for the optimal test", {}, {}, {}};

    // Exact profiles: every random discrete instance with its optimal rule.
    const auto exact = run_lemma1_oracle(opt.seed);
    rep.checks.push_back(absolute_check("exact discrete instances satisfying both bounds", 200,
                                        static_cast<double>(exact.lemma2_exact_holds), 0.0));

    Table t{"monte_carlo",
            {"instance", "r", "alpha", "alpha_se", "beta", "beta_se", "r(1-beta) - alpha", "r - alpha", "slack", "holds"},
            {}};
    std::size_t held = 0;
    const auto instances = run_lemma2_instances(opt);
    for (const auto& in : instances) {
        const auto& rp = in.report;
        t.rows.push_back({in.description, in.r, rp.alpha, in.estimate.alpha_se, rp.beta, in.estimate.beta_se,
                          rp.ratio_margin, rp.alpha_margin, rp.slack, rp.holds()});
        held += rp.holds();
    }
    rep.tables.push_back(std::move(t));
    rep.checks.push_back(absolute_check("Monte Carlo instances within 3 standard errors",
                                        static_cast<double>(instances.size()), static_cast<double>(held), 0.0));

    // A rule that always rejects has alpha = 1, beta = 0, so alpha/(1-beta) = 1 > r.
    const double r = 0.5;
    const auto all = mc_error_profile([](const NormalSummary&) { return true; },
                                      NormalMeanModel(3.0, 20, weight::PointMass{-1.0}, weight::PointMass{1.0}),
                                      MonteCarloConfig{1000, opt.seed, 1}, ErrorWeights::from_ratio(r));
    const auto neg = check_lemma2(all.profile, r, all.alpha_se, all.beta_se);
    rep.checks.push_back(bool_check("negative control (always reject, r=0.5) is flagged", !neg.holds(),
                                    "violation detected"));
    rep.notes.push_back(std::to_string(opt.trials) + " trials per hypothesis per instance, seed " +
                        std::to_string(opt.seed));
    return rep;
}

// ---------------------------------------------------------------------------
// Consistency

[[nodiscard]] inline Report verify_consistency(const SuiteOptions& opt = {}) {
    Report rep{"consistency", "Error rates of the two-sided tests as n grows (r = 1, theta0 = 0, sigma = 3, delta = 1)",
               {}, {}, {}};
    const TwoSidedSetting s;
    const auto& grid = default_consistency_grid();
    Table t{"sweep", {"test", "n", "alpha", "beta", "SERRORS"}, {}};
    for (const auto test : {NormalTest::intrinsic, NormalTest::two_point, NormalTest::indifference,
                            NormalTest::fixed_alpha_control}) {
        const auto rows = consistency_sweep(test, grid, s);
        for (const auto& row : rows)
            t.rows.push_back({to_string(test), row.n, row.profile.alpha, row.profile.beta, row.profile.serrors});
        const auto a = assess_consistency(rows);
        const std::string name = to_string(test);
        if (test == NormalTest::fixed_alpha_control) {
            bool constant = true;
            for (const auto& row : rows) constant = constant && row.profile.alpha == 0.05;
            rep.checks.push_back(bool_check("fixed_alpha_control keeps alpha = 0.05 on the grid", constant));
            rep.checks.push_back(bool_check("fixed_alpha_control is not consistent", !a.consistent()));
        } else {
            rep.checks.push_back({name + " alpha at n=10^4", 1e-3, a.final_alpha, a.final_alpha - 1e-3,
                                  "< 1e-3 and decreasing", a.alpha_below && a.alpha_decreasing});
            rep.checks.push_back({name + " beta at n=10^4", 1e-3, a.final_beta, a.final_beta - 1e-3,
                                  "< 1e-3 and decreasing", a.beta_below && a.beta_decreasing});
        }
    }
    rep.tables.push_back(std::move(t));

    // The closed forms against simulation at one sample size.
    Table mc{"closed_form_vs_monte_carlo", {"test", "n", "alpha", "alpha_mc", "alpha_se", "beta", "beta_mc", "beta_se"}, {}};
    const std::int64_t n = 100;
    std::uint64_t k = 0;
    for (const auto test : {NormalTest::intrinsic, NormalTest::two_point, NormalTest::indifference,
                            NormalTest::fixed_alpha_control}) {
        const auto cf = closed_form_profile(test, n, s);
        const auto est = mc_profile(test, n, s, MonteCarloConfig{opt.trials, opt.seed + 77 * ++k, opt.workers});
        mc.rows.push_back({to_string(test), n, cf.alpha, est.profile.alpha, est.alpha_se, cf.beta, est.profile.beta,
                           est.beta_se});
        // A zero count has zero estimated SE; one count is the resolution floor.
        const double floor = 1.0 / static_cast<double>(opt.trials);
        const bool ok = std::abs(cf.alpha - est.profile.alpha) <= 4.0 * std::max(est.alpha_se, floor) &&
                        std::abs(cf.beta - est.profile.beta) <= 4.0 * std::max(est.beta_se, floor);
        rep.checks.push_back(bool_check(std::string(to_string(test)) + " closed form within 4 SE of simulation (n=100)", ok));
    }
    rep.tables.push_back(std::move(mc));
    rep.notes.push_back("errors are averaged with the weights defining each test; the band test averages the "
                        "intrinsic prior restricted to the band (Type I) and to its complement (Type II)");
    return rep;
}

// ---------------------------------------------------------------------------
// Predictive matching

inline const std::vector<std::pair<double, double>>& matching_grid() {
    static const std::vector<std::pair<double, double>> grid = {
        {0.0, 1.0}, {0.0, 4.0}, {1.0, 3.0}, {-2.0, 2.0}, {0.5, 0.6}, {-10.0, 5.0}, {3.0, -1.0}, {0.0, 0.01},
        {100.0, 101.0}, {-7.5, 42.0}};
    return grid;
}

[[nodiscard]] inline Report verify_matching(const SuiteOptions& = {}) {
    Report rep{"matching", "Predictive matching of improper priors on minimal training samples", {}, {}, {}};
    Table ls{"location_scale", {"family", "x1", "x2", "predictive", "1/(2|x2-x1|)", "relative difference"}, {}};
    for (const auto family : {LocationScaleFamily::normal, LocationScaleFamily::cauchy}) {
        double worst = 0.0;
        for (const auto& [x1, x2] : matching_grid()) {
            const double v = predictive_matching_location_scale(family, x1, x2);
            const double exact = predictive_matching_exact(x1, x2);
            const double rel = relative_difference(v, exact);
            worst = std::max(worst, std::abs(rel));
            ls.rows.push_back({to_string(family), x1, x2, v, exact, rel});
        }
        rep.checks.push_back({std::string(to_string(family)) + " worst relative error on the grid", 0.0, worst, worst,
                              "<= 0.001", worst <= 1e-3});
    }
    rep.tables.push_back(std::move(ls));

    Table jn{"jeffreys_normal", {"x", "mu0", "m0", "m1", "1/(2|x-mu0|)", "|m0-m1|/m0"}, {}};
    double worst = 0.0;
    double worst_closed = 0.0;
    for (const auto& [x, mu0] : matching_grid()) {
        const auto m = predictive_matching_jeffreys_normal(x, mu0);
        const double exact = predictive_matching_exact(x, mu0);
        const double rel = std::abs(m.m0 - m.m1) / m.m0;
        worst = std::max(worst, rel);
        worst_closed = std::max(worst_closed, std::abs(relative_difference(m.m0, exact)));
        jn.rows.push_back({x, mu0, m.m0, m.m1, exact, rel});
    }
    rep.tables.push_back(std::move(jn));
    rep.checks.push_back({"Jeffreys normal worst |m0 - m1|/m0 on the grid", 0.0, worst, worst, "<= 0.001", worst <= 1e-3});
    rep.checks.push_back({"Jeffreys normal m0 against its closed form", 0.0, worst_closed, worst_closed, "<= 0.001",
                          worst_closed <= 1e-3});
    rep.notes.push_back("m0/m1 = 1 at every grid point, so the evidence ratio does not depend on the training sample");
    return rep;
}

// ---------------------------------------------------------------------------

[[nodiscard]] inline Report design_report(const DesignSpec& spec) {
    Report rep{"design", "Fixed-alpha design and the weight ratio it implies", {}, {}, {}};
    const auto d = design_simple_normal(spec);
    rep.tables.push_back({"design",
                          {"theta0", "theta1", "sigma", "alpha", "beta", "n_real", "n", "beta_achieved",
                           "mean_threshold", "implicit_ratio"},
                          {{spec.theta0, spec.theta1, spec.sigma, spec.alpha, spec.beta, d.n_real, d.n, d.beta_achieved,
                            d.mean_threshold, d.implicit_ratio}}});
    rep.checks.push_back(bool_check("beta_achieved <= beta target", d.beta_achieved <= spec.beta));
    rep.checks.push_back(bool_check("n = ceil(n_real)", d.n == static_cast<std::int64_t>(std::ceil(d.n_real))));
    const double back = degroot_threshold(d.n, spec, d.implicit_ratio);
    rep.checks.push_back(absolute_check("optimal threshold at the implicit ratio reproduces the design threshold",
                                        d.mean_threshold, back, 1e-10));
    return rep;
}

[[nodiscard]] inline Report verify(const std::string& suite, const SuiteOptions& opt = {}) {
    if (suite == "lemma1") return verify_lemma1(opt);
    if (suite == "lemma2") return verify_lemma2(opt);
    if (suite == "consistency") return verify_consistency(opt);
    if (suite == "matching") return verify_matching(opt);
    throw std::invalid_argument("unknown verification suite '" + suite + "'");
}

}  // namespace errsum
