#pragma once

// Error rates of the two-sided normal tests as the sample size grows:
//   intrinsic      point null vs intrinsic prior N(theta0, 2 sigma^2)
//   two_point      point null vs mass 1/2 at theta0 +- delta
//   indifference   posterior odds of the band theta0 +- delta
// plus the fixed-alpha classical rule as a control. Errors are averaged with
// the weights that define each test; the indifference test averages the
// intrinsic prior restricted to the band (Type I) and to its complement
// (Type II).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "errsum/design.hpp"
#include "errsum/evidence.hpp"
#include "errsum/special_functions.hpp"
#include "errsum/verification/monte_carlo.hpp"
#include "errsum/verification/quadrature.hpp"

namespace errsum {

enum class NormalTest { intrinsic, two_point, indifference, fixed_alpha_control };

[[nodiscard]] inline const char* to_string(NormalTest t) {
    switch (t) {
        case NormalTest::intrinsic: return "intrinsic";
        case NormalTest::two_point: return "two_point";
        case NormalTest::indifference: return "indifference";
        case NormalTest::fixed_alpha_control: return "fixed_alpha_control";
    }
    return "?";
}

struct TwoSidedSetting {
    double theta0 = 0.0;
    double sigma = 3.0;
    double delta = 1.0;  ///< two-point offset and indifference half-width
    double r = 1.0;
};

inline void validate(const TwoSidedSetting& s) {
    if (!(s.sigma > 0.0) || !(s.delta > 0.0) || !(s.r > 0.0) || !std::isfinite(s.theta0))
        throw domain_error("two-sided setting: sigma, delta and r must be positive");
}

// ---------------------------------------------------------------------------
// The optimal rules as predicates on the sample mean

struct IntrinsicRule {
    TwoSidedSetting s;
    [[nodiscard]] bool operator()(const NormalSummary& d) const {
        return evidence_ratio_two_sided_intrinsic(d, s.theta0).value < std::log(s.r);
    }
};

struct TwoPointRule {
    TwoSidedSetting s;
    [[nodiscard]] bool operator()(const NormalSummary& d) const {
        return evidence_ratio_two_point(d, s.theta0, s.delta).value < std::log(s.r);
    }
};

struct IndifferenceRule {
    TwoSidedSetting s;
    [[nodiscard]] bool operator()(const NormalSummary& d) const {
        return indifference_posterior_odds_normal(d, s.theta0, s.delta, s.r).reject;
    }
};

/// Sampling model for the indifference test: theta from the intrinsic prior
/// restricted to the band (H0) or to its complement (H1), by rejection.
struct IndifferenceModel {
    using data_type = NormalSummary;

    IndifferenceModel(const TwoSidedSetting& s, std::int64_t n) : s_(s), n_(n) {
        validate(s);
        validate(NormalSummary{s.theta0, n, s.sigma});
    }

    template <class URBG>
    [[nodiscard]] NormalSummary sample(Hypothesis h, URBG& rng) const {
        std::normal_distribution<double> prior(s_.theta0, std::sqrt(2.0) * s_.sigma);
        double theta = 0.0;
        for (;;) {
            theta = prior(rng);
            const bool inside = std::abs(theta - s_.theta0) <= s_.delta;
            if (inside == (h == Hypothesis::null)) break;
        }
        const double se = s_.sigma / std::sqrt(static_cast<double>(n_));
        return {std::normal_distribution<double>(theta, se)(rng), n_, s_.sigma};
    }

private:
    TwoSidedSetting s_;
    std::int64_t n_;
};

// ---------------------------------------------------------------------------
// Closed forms. Each test rejects when |ybar - theta0| exceeds a cutoff d.

namespace detail {

// Pr(|ybar - theta0| > d) when ybar ~ N(theta, se^2).
inline double outside_prob(double theta, double theta0, double d, double se) {
    if (d <= 0.0) return 1.0;
    return std::exp(normal_log_outside_mass((theta0 - d - theta) / se, (theta0 + d - theta) / se));
}

inline double inside_prob(double theta, double theta0, double d, double se) {
    if (d <= 0.0) return 0.0;
    return std::exp(normal_log_interval_mass((theta0 - d - theta) / se, (theta0 + d - theta) / se));
}

}  // namespace detail

/// Intrinsic test: ln ratio = ln(2n+1)/2 - z^2 n/(2n+1) with z the standardized mean.
[[nodiscard]] inline ErrorProfile profile_intrinsic(std::int64_t n, const TwoSidedSetting& s) {
    validate(s);
    const double nd = static_cast<double>(n);
    const double k = 2.0 * nd + 1.0;
    const double z2 = k / nd * (0.5 * std::log(k) - std::log(s.r));
    if (z2 <= 0.0) return make_profile(1.0, 0.0, ErrorWeights::from_ratio(s.r));
    const double zc = std::sqrt(z2);
    const double alpha = 2.0 * std::exp(normal_log_tail(zc));
    // Under the intrinsic marginal the standardized mean has variance 2n + 1.
    const double beta = std::exp(normal_log_interval_mass(-zc / std::sqrt(k), zc / std::sqrt(k)));
    return make_profile(alpha, beta, ErrorWeights::from_ratio(s.r));
}

/// Two-point test: reject iff ln cosh(n delta (ybar - theta0)/sigma^2) > n delta^2/(2 sigma^2) - ln r.
[[nodiscard]] inline ErrorProfile profile_two_point(std::int64_t n, const TwoSidedSetting& s) {
    validate(s);
    const double nd = static_cast<double>(n);
    const double s2 = s.sigma * s.sigma;
    const double h = nd * s.delta * s.delta / (2.0 * s2) - std::log(s.r);
    if (h <= 0.0) return make_profile(1.0, 0.0, ErrorWeights::from_ratio(s.r));
    const double u = h + std::log1p(std::sqrt(-std::expm1(-2.0 * h)));  // acosh(e^h)
    const double d = u * s2 / (nd * s.delta);
    const double se = s.sigma / std::sqrt(nd);
    const double alpha = detail::outside_prob(s.theta0, s.theta0, d, se);
    const double beta = 0.5 * (detail::inside_prob(s.theta0 - s.delta, s.theta0, d, se) +
                               detail::inside_prob(s.theta0 + s.delta, s.theta0, d, se));
    return make_profile(alpha, beta, ErrorWeights::from_ratio(s.r));
}

/// Cutoff on |ybar - theta0| beyond which the indifference test rejects
/// (0 when it always rejects). Posterior odds fall as |ybar - theta0| grows.
[[nodiscard]] inline double indifference_cutoff(std::int64_t n, const TwoSidedSetting& s) {
    validate(s);
    auto log_odds_minus = [&](double dist) {
        return indifference_posterior_odds_normal(NormalSummary{s.theta0 + dist, n, s.sigma}, s.theta0, s.delta, s.r)
                   .odds.value -
               std::log(s.r);
    };
    if (log_odds_minus(0.0) <= 0.0) return 0.0;
    double lo = 0.0;
    double hi = s.delta + s.sigma;
    while (log_odds_minus(hi) > 0.0) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (log_odds_minus(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

[[nodiscard]] inline ErrorProfile profile_indifference(std::int64_t n, const TwoSidedSetting& s) {
    const double d = indifference_cutoff(n, s);
    const double se = s.sigma / std::sqrt(static_cast<double>(n));
    const double tau = std::sqrt(2.0) * s.sigma;
    const double t0 = s.theta0;
    auto prior = [&](double th) { return std::exp(normal_log_density(th, t0, tau * tau)); };
    const double p0 = std::exp(normal_log_interval_mass(-s.delta / tau, s.delta / tau));
    const double p1 = std::exp(normal_log_outside_mass(-s.delta / tau, s.delta / tau));
    std::vector<double> breaks = {t0};
    for (double sign : {-1.0, 1.0})
        for (double off : {0.0, -8.0, -3.0, -1.0, 1.0, 3.0, 8.0}) breaks.push_back(t0 + sign * (d + off * se));

    auto reject_h0 = [&](double th) { return prior(th) * detail::outside_prob(th, t0, d, se); };
    auto accept_h1 = [&](double th) { return prior(th) * detail::inside_prob(th, t0, d, se); };
    const double alpha = integrate_with_breaks(reject_h0, t0 - s.delta, t0 + s.delta, breaks) / p0;
    const double far = s.delta + d + 40.0 * tau;
    const double beta = (integrate_with_breaks(accept_h1, t0 - far, t0 - s.delta, breaks) +
                         integrate_with_breaks(accept_h1, t0 + s.delta, t0 + far, breaks)) /
                        p1;
    return make_profile(std::clamp(alpha, 0.0, 1.0), std::clamp(beta, 0.0, 1.0), ErrorWeights::from_ratio(s.r));
}

/// The worked design's classical rule at fixed alpha.
[[nodiscard]] inline ErrorProfile profile_fixed_alpha_control(std::int64_t n, const DesignSpec& spec = DesignSpec{}) {
    return error_profile_fixed_alpha(n, spec);
}

// ---------------------------------------------------------------------------
// Sweeps

struct ConsistencyRow {
    std::int64_t n = 0;
    ErrorProfile profile;
};

inline const std::vector<std::int64_t>& default_consistency_grid() {
    static const std::vector<std::int64_t> grid = {10, 100, 1000, 10000};
    return grid;
}

[[nodiscard]] inline ErrorProfile closed_form_profile(NormalTest test, std::int64_t n, const TwoSidedSetting& s) {
    switch (test) {
        case NormalTest::intrinsic: return profile_intrinsic(n, s);
        case NormalTest::two_point: return profile_two_point(n, s);
        case NormalTest::indifference: return profile_indifference(n, s);
        case NormalTest::fixed_alpha_control: return profile_fixed_alpha_control(n);
    }
    throw domain_error("unknown test");
}

[[nodiscard]] inline std::vector<ConsistencyRow> consistency_sweep(NormalTest test, std::span<const std::int64_t> n_grid,
                                                                   const TwoSidedSetting& s = TwoSidedSetting{}) {
    std::vector<ConsistencyRow> rows;
    rows.reserve(n_grid.size());
    for (const auto n : n_grid) {
        if (n < 1) throw domain_error("sample size must be >= 1");
        rows.push_back({n, closed_form_profile(test, n, s)});
    }
    return rows;
}

struct ConsistencyAssessment {
    bool alpha_decreasing = false;  ///< non-increasing over the last half of the grid
    bool beta_decreasing = false;
    bool alpha_below = false;  ///< below the threshold at the end of the grid
    bool beta_below = false;
    double final_alpha = 0.0;
    double final_beta = 0.0;

    [[nodiscard]] bool consistent() const { return alpha_decreasing && beta_decreasing && alpha_below && beta_below; }
};

[[nodiscard]] inline ConsistencyAssessment assess_consistency(std::span<const ConsistencyRow> rows,
                                                              double threshold = 1e-3) {
    if (rows.empty()) throw domain_error("assess_consistency: empty sweep");
    ConsistencyAssessment a;
    a.alpha_decreasing = a.beta_decreasing = true;
    for (std::size_t i = rows.size() / 2 + 1; i < rows.size(); ++i) {
        a.alpha_decreasing = a.alpha_decreasing && rows[i].profile.alpha <= rows[i - 1].profile.alpha;
        a.beta_decreasing = a.beta_decreasing && rows[i].profile.beta <= rows[i - 1].profile.beta;
    }
    a.final_alpha = rows.back().profile.alpha;
    a.final_beta = rows.back().profile.beta;
    a.alpha_below = a.final_alpha < threshold;
    a.beta_below = a.final_beta < threshold;
    return a;
}

/// Monte Carlo estimate of the same profile, for cross-checking the closed forms.
[[nodiscard]] inline McErrorProfile mc_profile(NormalTest test, std::int64_t n, const TwoSidedSetting& s,
                                               const MonteCarloConfig& config) {
    validate(s);
    const auto w = ErrorWeights::from_ratio(s.r);
    const WeightSpec null_point = weight::PointMass{s.theta0};
    switch (test) {
        case NormalTest::intrinsic:
            return mc_error_profile(IntrinsicRule{s},
                                    NormalMeanModel(s.sigma, n, null_point, weight::Normal{s.theta0, 2.0 * s.sigma * s.sigma}),
                                    config, w);
        case NormalTest::two_point:
            return mc_error_profile(TwoPointRule{s},
                                    NormalMeanModel(s.sigma, n, null_point, weight::TwoPointMass{s.theta0, s.delta}), config,
                                    w);
        case NormalTest::indifference:
            return mc_error_profile(IndifferenceRule{s}, IndifferenceModel(s, n), config, w);
        case NormalTest::fixed_alpha_control: {
            const DesignSpec spec;
            const double cut = fixed_alpha_threshold(spec, static_cast<double>(n));
            return mc_error_profile([cut](const NormalSummary& d) { return d.mean > cut; },
                                    NormalMeanModel(spec.sigma, n, weight::PointMass{spec.theta0},
                                                    weight::PointMass{spec.theta1}),
                                    config);
        }
    }
    throw domain_error("unknown test");
}

}  // namespace errsum
