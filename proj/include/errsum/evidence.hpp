#pragma once

// Weighted likelihoods ("evidences") for the normal-mean and Bernoulli
// models, the closed-form evidence ratios built from them, and the classical
// p-values they are compared against.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <type_traits>
#include <variant>

#include "errsum/errors.hpp"
#include "errsum/special_functions.hpp"

namespace errsum {

enum class Family { normal_known_variance, binomial, negative_binomial };

[[nodiscard]] inline const char* to_string(Family f) {
    switch (f) {
        case Family::normal_known_variance: return "normal";
        case Family::binomial: return "binomial";
        case Family::negative_binomial: return "negative_binomial";
    }
    return "?";
}

enum class Hypothesis { null = 0, alternative = 1 };

// ---------------------------------------------------------------------------
// Data summaries

/// Sufficient statistics of n draws from N(theta, sigma^2), sigma known.
struct NormalSummary {
    double mean = 0.0;
    std::int64_t n = 1;
    double sigma = 1.0;

    [[nodiscard]] double standard_error() const { return sigma / std::sqrt(static_cast<double>(n)); }
    [[nodiscard]] double variance_of_mean() const { return sigma * sigma / static_cast<double>(n); }
};

/// Bernoulli counts. For the negative-binomial design the experiment stopped
/// at the last failure, so tails() is the stopping count.
struct CountSummary {
    std::int64_t successes = 0;
    std::int64_t trials = 0;

    [[nodiscard]] std::int64_t tails() const { return trials - successes; }
};

using DataSummary = std::variant<NormalSummary, CountSummary>;

inline void validate(const NormalSummary& d) {
    if (d.n < 1) throw domain_error("normal summary: n must be >= 1");
    if (!(d.sigma > 0.0) || !std::isfinite(d.sigma)) throw domain_error("normal summary: sigma must be positive");
    if (!std::isfinite(d.mean)) throw domain_error("normal summary: mean must be finite");
}

inline void validate(const CountSummary& d) {
    if (d.successes < 0 || d.trials < 0 || d.successes > d.trials)
        throw domain_error("count summary: requires 0 <= successes <= trials");
}

// ---------------------------------------------------------------------------
// Parameter regions

namespace region {
struct Point {
    double value;
};
/// Open interval (lo, hi).
struct Interval {
    double lo, hi;
};
struct ComplementOfPoint {
    double value;
};
/// Everything outside the closed interval [lo, hi].
struct ComplementOfInterval {
    double lo, hi;
};
}  // namespace region

using Region = std::variant<region::Point, region::Interval, region::ComplementOfPoint, region::ComplementOfInterval>;

[[nodiscard]] inline bool contains(const Region& r, double theta) {
    return std::visit(
        [theta](const auto& g) -> bool {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, region::Point>) return theta == g.value;
            else if constexpr (std::is_same_v<T, region::Interval>) return theta > g.lo && theta < g.hi;
            else if constexpr (std::is_same_v<T, region::ComplementOfPoint>) return theta != g.value;
            else return theta < g.lo || theta > g.hi;
        },
        r);
}

struct HypothesisPair {
    Family family = Family::normal_known_variance;
    Region null_region = region::Point{0.0};
    Region alternative_region = region::ComplementOfPoint{0.0};
};

namespace detail {

inline bool regions_disjoint(const Region& a, const Region& b) {
    using namespace region;
    if (const auto* p = std::get_if<Point>(&a)) return !contains(b, p->value);
    if (const auto* p = std::get_if<Point>(&b)) return !contains(a, p->value);
    if (const auto* i = std::get_if<Interval>(&a)) {
        if (const auto* j = std::get_if<Interval>(&b)) return i->hi <= j->lo || j->hi <= i->lo;
        if (const auto* c = std::get_if<ComplementOfInterval>(&b)) return i->lo >= c->lo && i->hi <= c->hi;
        return false;
    }
    if (std::holds_alternative<Interval>(b)) return regions_disjoint(b, a);
    return false;  // two complements always overlap
}

inline void check_region(const Region& r, Family family, const char* which) {
    const bool unit = family != Family::normal_known_variance;
    auto in_space = [unit](double v) { return std::isfinite(v) && (!unit || (v >= 0.0 && v <= 1.0)); };
    std::visit(
        [&](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, region::Point> || std::is_same_v<T, region::ComplementOfPoint>) {
                if (!in_space(g.value)) throw domain_error(std::string(which) + " region lies outside the parameter space");
            } else {
                if (!(g.lo < g.hi) || !in_space(g.lo) || !in_space(g.hi))
                    throw domain_error(std::string(which) + " region must satisfy lo < hi within the parameter space");
            }
        },
        r);
}

}  // namespace detail

inline void validate(const HypothesisPair& h) {
    detail::check_region(h.null_region, h.family, "null");
    detail::check_region(h.alternative_region, h.family, "alternative");
    if (!detail::regions_disjoint(h.null_region, h.alternative_region))
        throw domain_error("hypothesis regions must be disjoint");
}

// ---------------------------------------------------------------------------
// Weight measures

namespace weight {
struct PointMass {
    double theta;
};
/// Mass 1/2 at center - delta and at center + delta.
struct TwoPointMass {
    double center, delta;
};
struct Uniform {
    double lo, hi;
};
struct Beta {
    double a, b;
};
struct Normal {
    double mean, variance;
};
/// Point mass at the null value of whatever hypothesis pair it is used with.
struct DiracAtNull {};
/// A flat, non-normalizable reference measure. Usable only through predictive
/// matching; every evidence and sampling routine refuses it.
struct ImproperReference {};
}  // namespace weight

using WeightSpec = std::variant<weight::PointMass, weight::TwoPointMass, weight::Uniform, weight::Beta,
                                weight::Normal, weight::DiracAtNull, weight::ImproperReference>;

[[nodiscard]] inline bool is_proper(const WeightSpec& w) { return !std::holds_alternative<weight::ImproperReference>(w); }

[[nodiscard]] inline std::string describe(const WeightSpec& w) {
    return std::visit(
        [](const auto& g) -> std::string {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, weight::PointMass>) return "point_mass";
            else if constexpr (std::is_same_v<T, weight::TwoPointMass>) return "two_point_mass";
            else if constexpr (std::is_same_v<T, weight::Uniform>) return "uniform";
            else if constexpr (std::is_same_v<T, weight::Beta>) return "beta";
            else if constexpr (std::is_same_v<T, weight::Normal>) return "normal";
            else if constexpr (std::is_same_v<T, weight::DiracAtNull>) return "dirac_at_null";
            else return "improper_reference";
        },
        w);
}

inline void validate(const WeightSpec& w) {
    std::visit(
        [](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, weight::PointMass>) {
                if (!std::isfinite(g.theta)) throw domain_error("point_mass: theta must be finite");
            } else if constexpr (std::is_same_v<T, weight::TwoPointMass>) {
                if (!(g.delta > 0.0) || !std::isfinite(g.center)) throw domain_error("two_point_mass: delta must be positive");
            } else if constexpr (std::is_same_v<T, weight::Uniform>) {
                if (!(g.lo < g.hi) || !std::isfinite(g.lo) || !std::isfinite(g.hi))
                    throw domain_error("uniform: requires finite lo < hi");
            } else if constexpr (std::is_same_v<T, weight::Beta>) {
                if (!(g.a > 0.0) || !(g.b > 0.0)) throw domain_error("beta: parameters must be positive");
            } else if constexpr (std::is_same_v<T, weight::Normal>) {
                if (!(g.variance > 0.0) || !std::isfinite(g.mean)) throw domain_error("normal: variance must be positive");
            }
        },
        w);
}

/// Replaces DiracAtNull by a point mass at the given null value.
[[nodiscard]] inline WeightSpec resolve(const WeightSpec& w, double null_value) {
    if (std::holds_alternative<weight::DiracAtNull>(w)) return weight::PointMass{null_value};
    return w;
}

/// Log density of a continuous weight at theta (-inf outside its support).
[[nodiscard]] inline double log_density(const WeightSpec& w, double theta) {
    constexpr double ninf = -std::numeric_limits<double>::infinity();
    if (const auto* u = std::get_if<weight::Uniform>(&w))
        return (theta >= u->lo && theta <= u->hi) ? -std::log(u->hi - u->lo) : ninf;
    if (const auto* b = std::get_if<weight::Beta>(&w)) {
        if (theta <= 0.0 || theta >= 1.0) return ninf;
        return (b->a - 1.0) * std::log(theta) + (b->b - 1.0) * std::log1p(-theta) - log_beta(b->a, b->b);
    }
    if (const auto* n = std::get_if<weight::Normal>(&w)) return normal_log_density(theta, n->mean, n->variance);
    throw domain_error("log_density: " + describe(w) + " has no density");
}

// ---------------------------------------------------------------------------
// Evidences

/// A weighted likelihood on the log scale. The likelihood's combinatorial
/// constant is kept apart from the kernel so that it cancels exactly in a
/// ratio of evidences computed on the same data.
struct LogEvidence {
    double log_kernel = 0.0;
    double log_constant = 0.0;
    Hypothesis hypothesis = Hypothesis::null;

    [[nodiscard]] double log_value() const { return log_kernel + log_constant; }
};

/// ln(evidence0 / evidence1).
[[nodiscard]] inline double log_evidence_ratio(const LogEvidence& e0, const LogEvidence& e1) {
    return (e0.log_kernel - e1.log_kernel) + (e0.log_constant - e1.log_constant);
}

/// Which sampling design the counts came from; only the constant differs.
enum class CountLikelihood { kernel_only, binomial, negative_binomial };

[[nodiscard]] inline double log_count_constant(const CountSummary& d, CountLikelihood kind) {
    const auto s = static_cast<double>(d.successes);
    const auto f = static_cast<double>(d.tails());
    switch (kind) {
        case CountLikelihood::kernel_only: return 0.0;
        case CountLikelihood::binomial: return log_gamma(s + f + 1.0) - log_gamma(s + 1.0) - log_gamma(f + 1.0);
        case CountLikelihood::negative_binomial:
            if (d.tails() < 1) throw domain_error("negative binomial likelihood needs at least one tail");
            return log_gamma(s + f) - log_gamma(s + 1.0) - log_gamma(f);
    }
    return 0.0;
}

namespace detail {

// S ln(theta) + F ln(1 - theta) with 0 * ln 0 = 0.
inline double bernoulli_log_kernel(double theta, double s, double f) {
    if (theta < 0.0 || theta > 1.0) throw domain_error("success probability must lie in [0, 1]");
    const double ls = s == 0.0 ? 0.0 : s * std::log(theta);
    const double lf = f == 0.0 ? 0.0 : f * std::log1p(-theta);
    return ls + lf;
}

}  // namespace detail

[[nodiscard]] inline LogEvidence log_evidence_binomial(const CountSummary& data, const WeightSpec& w,
                                                       Hypothesis hypothesis = Hypothesis::null,
                                                       CountLikelihood kind = CountLikelihood::binomial) {
    validate(data);
    validate(w);
    const auto s = static_cast<double>(data.successes);
    const auto f = static_cast<double>(data.tails());
    const double kernel = std::visit(
        [&](const auto& g) -> double {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, weight::PointMass>) {
                return detail::bernoulli_log_kernel(g.theta, s, f);
            } else if constexpr (std::is_same_v<T, weight::TwoPointMass>) {
                return log_sum_exp(detail::bernoulli_log_kernel(g.center - g.delta, s, f),
                                   detail::bernoulli_log_kernel(g.center + g.delta, s, f)) -
                       std::numbers::ln2;
            } else if constexpr (std::is_same_v<T, weight::Uniform>) {
                if (g.lo < 0.0 || g.hi > 1.0) throw domain_error("uniform weight must lie within [0, 1]");
                return log_beta(s + 1.0, f + 1.0) + log_beta_interval_mass(g.lo, g.hi, s + 1.0, f + 1.0) -
                       std::log(g.hi - g.lo);
            } else if constexpr (std::is_same_v<T, weight::Beta>) {
                return log_beta(s + g.a, f + g.b) - log_beta(g.a, g.b);
            } else if constexpr (std::is_same_v<T, weight::DiracAtNull>) {
                throw domain_error("dirac_at_null must be resolved against a hypothesis pair first");
            } else {
                throw domain_error("log_evidence_binomial: unsupported weight " + describe(g));
            }
        },
        w);
    return LogEvidence{kernel, log_count_constant(data, kind), hypothesis};
}

/// Evidence of the sample mean, whose likelihood is N(mean | theta, sigma^2/n).
[[nodiscard]] inline LogEvidence log_evidence_normal(const NormalSummary& data, const WeightSpec& w,
                                                     Hypothesis hypothesis = Hypothesis::null) {
    validate(data);
    validate(w);
    const double v = data.variance_of_mean();
    const double kernel = std::visit(
        [&](const auto& g) -> double {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, weight::PointMass>) {
                return normal_log_density(data.mean, g.theta, v);
            } else if constexpr (std::is_same_v<T, weight::TwoPointMass>) {
                return log_sum_exp(normal_log_density(data.mean, g.center - g.delta, v),
                                   normal_log_density(data.mean, g.center + g.delta, v)) -
                       std::numbers::ln2;
            } else if constexpr (std::is_same_v<T, weight::Normal>) {
                return normal_log_density(data.mean, g.mean, g.variance + v);
            } else if constexpr (std::is_same_v<T, weight::Uniform>) {
                const double se = std::sqrt(v);
                return normal_log_interval_mass((g.lo - data.mean) / se, (g.hi - data.mean) / se) -
                       std::log(g.hi - g.lo);
            } else if constexpr (std::is_same_v<T, weight::DiracAtNull>) {
                throw domain_error("dirac_at_null must be resolved against a hypothesis pair first");
            } else {
                throw domain_error("log_evidence_normal: unsupported weight " + describe(g));
            }
        },
        w);
    return LogEvidence{kernel, 0.0, hypothesis};
}

// ---------------------------------------------------------------------------
// Closed-form evidence ratios (null over alternative)

/// ln f(x|theta0)/f(x|theta1) for two simple normal hypotheses.
[[nodiscard]] inline double log_likelihood_ratio_simple_normal(const NormalSummary& data, double theta0,
                                                               double theta1) {
    validate(data);
    if (theta0 == theta1) throw domain_error("simple hypotheses must differ (theta0 == theta1)");
    const double n = static_cast<double>(data.n);
    return n / (data.sigma * data.sigma) * (theta1 - theta0) * ((theta0 + theta1) / 2.0 - data.mean);
}

/// pi * 0.5^N / B(s + 1/2, N - s + 1/2): point null at 1/2 against the
/// Jeffreys Beta(1/2, 1/2) weight.
[[nodiscard]] inline LogReal evidence_ratio_freeman(std::int64_t s, std::int64_t n) {
    const CountSummary data{s, n};
    validate(data);
    const auto e0 = log_evidence_binomial(data, weight::PointMass{0.5}, Hypothesis::null);
    const auto e1 = log_evidence_binomial(data, weight::Beta{0.5, 0.5}, Hypothesis::alternative);
    return LogReal{log_evidence_ratio(e0, e1)};
}

/// Point null against the intrinsic prior N(theta0, 2 sigma^2):
/// N(ybar | theta0, sigma^2/n) / N(ybar | theta0, sigma^2 (2 + 1/n)).
[[nodiscard]] inline LogReal evidence_ratio_two_sided_intrinsic(const NormalSummary& data, double theta0) {
    validate(data);
    const double n = static_cast<double>(data.n);
    const double s2 = data.sigma * data.sigma;
    return LogReal{normal_log_density(data.mean, theta0, s2 / n) -
                   normal_log_density(data.mean, theta0, s2 * (2.0 + 1.0 / n))};
}

/// Point null against mass 1/2 at each of theta0 - delta and theta0 + delta.
[[nodiscard]] inline LogReal evidence_ratio_two_point(const NormalSummary& data, double theta0, double delta) {
    validate(data);
    if (!(delta > 0.0)) throw domain_error("two-point alternative: delta must be positive");
    const double v = data.variance_of_mean();
    const double num = normal_log_density(data.mean, theta0, v);
    const double den = log_sum_exp(normal_log_density(data.mean, theta0 - delta, v),
                                   normal_log_density(data.mean, theta0 + delta, v)) -
                       std::numbers::ln2;
    return LogReal{num - den};
}

/// The two-point test written as a sum of exponentials compared with 2/r
/// (evaluated on the log scale).
[[nodiscard]] inline bool two_point_rearranged_rejects(const NormalSummary& data, double theta0, double delta,
                                                       double r) {
    validate(data);
    if (!(delta > 0.0)) throw domain_error("two-point alternative: delta must be positive");
    if (!(r > 0.0)) throw domain_error("ratio r must be positive");
    const double k = static_cast<double>(data.n) * delta / (2.0 * data.sigma * data.sigma);
    const double d = data.mean - theta0;
    const double lhs = log_sum_exp(-k * (delta - 2.0 * d), -k * (delta + 2.0 * d));
    return lhs > std::numbers::ln2 - std::log(r);
}

struct IndifferenceOdds {
    LogReal odds;  ///< Pr(indifference band | data) / (1 - Pr(...))
    bool reject = false;
};

/// Posterior odds of the band [theta0 - delta, theta0 + delta] under the
/// intrinsic prior N(theta0, 2 sigma^2) taken over the whole line.
[[nodiscard]] inline IndifferenceOdds indifference_posterior_odds_normal(const NormalSummary& data, double theta0,
                                                                         double delta, double r) {
    validate(data);
    if (!(delta > 0.0)) throw domain_error("indifference band: delta must be positive");
    if (!(r > 0.0)) throw domain_error("ratio r must be positive");
    const double n = static_cast<double>(data.n);
    const double s2 = data.sigma * data.sigma;
    const double post_var = 1.0 / (n / s2 + 1.0 / (2.0 * s2));
    const double post_mean = post_var * (n * data.mean / s2 + theta0 / (2.0 * s2));
    const double sd = std::sqrt(post_var);
    const double lo = (theta0 - delta - post_mean) / sd;
    const double hi = (theta0 + delta - post_mean) / sd;
    const LogReal odds{normal_log_interval_mass(lo, hi) - normal_log_outside_mass(lo, hi)};
    return {odds, odds.value < std::log(r)};
}

/// Posterior odds of (1/2 - delta, 1/2 + delta) under the Jeffreys posterior
/// Beta(S + 1/2, N - S + 1/2).
[[nodiscard]] inline LogReal indifference_posterior_odds_binomial(const CountSummary& data, double delta) {
    validate(data);
    if (!(delta > 0.0 && delta < 0.5)) throw domain_error("indifference band: delta must lie in (0, 0.5)");
    const double a = static_cast<double>(data.successes) + 0.5;
    const double b = static_cast<double>(data.tails()) + 0.5;
    return LogReal{log_beta_interval_mass(0.5 - delta, 0.5 + delta, a, b) -
                   log_beta_outside_mass(0.5 - delta, 0.5 + delta, a, b)};
}

/// Posterior probability of a simple null given ln(f0/f1) and prior mass pi0.
[[nodiscard]] inline double posterior_null_probability(double log_ratio_01, double pi0) {
    if (!(pi0 > 0.0 && pi0 < 1.0)) throw domain_error("prior probability must lie in (0, 1)");
    const double x = log_ratio_01 + std::log(pi0) - std::log1p(-pi0);
    return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

// ---------------------------------------------------------------------------
// Classical p-values

/// Pr(X >= s) for X ~ Binomial(n, theta), summed exactly on the log scale.
[[nodiscard]] inline double pvalue_binomial_tail(std::int64_t s, std::int64_t n, double theta = 0.5) {
    validate(CountSummary{s, n});
    if (!(theta > 0.0 && theta < 1.0)) throw domain_error("theta must lie in (0, 1)");
    const double lt = std::log(theta);
    const double lf = std::log1p(-theta);
    const double ln_nfact = log_gamma(static_cast<double>(n) + 1.0);
    const double mode = std::floor((static_cast<double>(n) + 1.0) * theta);
    double acc = -std::numeric_limits<double>::infinity();
    for (std::int64_t k = s; k <= n; ++k) {
        const auto kd = static_cast<double>(k);
        const double term = ln_nfact - log_gamma(kd + 1.0) - log_gamma(static_cast<double>(n - k) + 1.0) +
                            kd * lt + static_cast<double>(n - k) * lf;
        acc = log_sum_exp(acc, term);
        if (kd > mode && term < acc - 46.0) break;  // remaining terms < 1e-20 of the sum
    }
    return std::min(1.0, std::exp(acc));
}

/// Pr(S >= s) where S counts successes before the tails-th failure,
/// computed as one minus the finite sum over 0..s-1.
[[nodiscard]] inline double pvalue_negative_binomial_tail(std::int64_t s, std::int64_t tails, double theta = 0.5) {
    if (s < 0 || tails < 1) throw domain_error("negative binomial tail: requires s >= 0 and tails >= 1");
    if (!(theta > 0.0 && theta < 1.0)) throw domain_error("theta must lie in (0, 1)");
    const auto t = static_cast<double>(tails);
    double below = 0.0;
    for (std::int64_t k = 0; k < s; ++k) {
        const auto kd = static_cast<double>(k);
        below += std::exp(log_gamma(kd + t) - log_gamma(kd + 1.0) - log_gamma(t) + kd * std::log(theta) +
                          t * std::log1p(-theta));
    }
    return std::max(0.0, 1.0 - below);
}

/// Two-sided test of theta = 1/2 by the continuity-corrected normal approximation.
[[nodiscard]] inline double pvalue_two_sided_binomial(std::int64_t s, std::int64_t n) {
    validate(CountSummary{s, n});
    if (n < 1) throw domain_error("two-sided binomial p-value needs at least one trial");
    const double nd = static_cast<double>(n);
    const double z = (std::abs(static_cast<double>(s) - nd / 2.0) - 0.5) / (std::sqrt(nd) / 2.0);
    if (z <= 0.0) return 1.0;
    return std::min(1.0, 2.0 * std::exp(normal_log_tail(z)));
}

/// Exact two-sided binomial p-value at theta = 1/2 (doubled larger tail).
[[nodiscard]] inline double pvalue_two_sided_binomial_exact(std::int64_t s, std::int64_t n) {
    validate(CountSummary{s, n});
    return std::min(1.0, 2.0 * pvalue_binomial_tail(std::max(s, n - s), n));
}

[[nodiscard]] inline double pvalue_two_sided_normal(const NormalSummary& data, double theta0) {
    validate(data);
    const double z = std::abs(data.mean - theta0) / data.standard_error();
    return std::min(1.0, 2.0 * std::exp(normal_log_tail(z)));
}

}  // namespace errsum
