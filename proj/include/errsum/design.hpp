#pragma once

// Simple-vs-simple normal designs: the classical fixed-alpha design, the
// weight ratio it implies, and the error profiles of both rules as n varies.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "errsum/decision.hpp"
#include "errsum/errors.hpp"
#include "errsum/special_functions.hpp"

namespace errsum {

/// Averaged Type I/II errors of a test and a*alpha + b*beta.
struct ErrorProfile {
    double alpha = 0.0;
    double beta = 0.0;
    double serrors = 0.0;
};

[[nodiscard]] inline ErrorProfile make_profile(double alpha, double beta, const ErrorWeights& w) {
    return {alpha, beta, w.a() * alpha + w.b() * beta};
}

/// H0: theta = theta0 vs H1: theta = theta1 for normal data with known sigma,
/// with the classical error targets.
struct DesignSpec {
    double theta0 = -1.0;
    double theta1 = 1.0;
    double sigma = 3.0;
    double alpha = 0.05;
    double beta = 0.1;

    /// +1 when H1 lies above H0 (reject for large means), -1 otherwise.
    [[nodiscard]] double direction() const { return theta1 > theta0 ? 1.0 : -1.0; }
    [[nodiscard]] double separation() const { return std::abs(theta1 - theta0); }
    [[nodiscard]] double midpoint() const { return 0.5 * (theta0 + theta1); }
};

inline void validate(const DesignSpec& s) {
    if (!std::isfinite(s.theta0) || !std::isfinite(s.theta1) || s.theta0 == s.theta1)
        throw domain_error("design: theta0 and theta1 must be finite and distinct");
    if (!(s.sigma > 0.0)) throw domain_error("design: sigma must be positive");
    if (!(s.alpha > 0.0 && s.alpha < 1.0) || !(s.beta > 0.0 && s.beta < 1.0))
        throw domain_error("design: alpha and beta targets must lie in (0, 1)");
    if (s.alpha + s.beta >= 1.0) throw domain_error("design: infeasible targets (alpha + beta >= 1)");
}

struct DesignResult {
    double n_real = 0.0;
    std::int64_t n = 0;
    double beta_achieved = 0.0;
    double mean_threshold = 0.0;  ///< reject H0 when the sample mean is beyond this
    double implicit_ratio = 0.0;  ///< the b/a under which this threshold is optimal
};

/// Sample-mean cutoff of the fixed-alpha rule at sample size n (real n allowed).
[[nodiscard]] inline double fixed_alpha_threshold(const DesignSpec& spec, double n) {
    validate(spec);
    if (!(n > 0.0)) throw domain_error("sample size must be positive");
    return spec.theta0 + spec.direction() * normal_quantile(1.0 - spec.alpha) * spec.sigma / std::sqrt(n);
}

/// ln(b/a) that makes a given mean threshold optimal at sample size n,
/// i.e. the log likelihood ratio ln f(x|theta0)/f(x|theta1) at the threshold.
[[nodiscard]] inline double implicit_log_ratio(const DesignSpec& spec, double n, double mean_threshold) {
    return n / (spec.sigma * spec.sigma) * (spec.theta1 - spec.theta0) * (spec.midpoint() - mean_threshold);
}

[[nodiscard]] inline double implicit_weight_ratio(const DesignResult& result, const DesignSpec& spec) {
    validate(spec);
    return std::exp(implicit_log_ratio(spec, static_cast<double>(result.n), result.mean_threshold));
}

/// Classical design: smallest n with power 1 - beta at level alpha.
[[nodiscard]] inline DesignResult design_simple_normal(const DesignSpec& spec) {
    validate(spec);
    const double z_sum = normal_quantile(1.0 - spec.alpha) + normal_quantile(1.0 - spec.beta);
    const double root_n = z_sum * spec.sigma / spec.separation();
    DesignResult out;
    out.n_real = root_n * root_n;
    out.n = static_cast<std::int64_t>(std::ceil(out.n_real));
    const double n = static_cast<double>(out.n);
    out.beta_achieved =
        normal_cdf(normal_quantile(1.0 - spec.alpha) - std::sqrt(n) * spec.separation() / spec.sigma);
    out.mean_threshold = fixed_alpha_threshold(spec, n);
    out.implicit_ratio = implicit_weight_ratio(out, spec);
    return out;
}

/// Mean cutoff of the optimal rule ln f0/f1 < ln r at sample size n.
[[nodiscard]] inline double degroot_threshold(std::int64_t n, const DesignSpec& spec, double r) {
    validate(spec);
    if (n < 1) throw domain_error("sample size must be >= 1");
    if (!(r > 0.0)) throw domain_error("ratio r must be positive");
    return spec.midpoint() -
           spec.sigma * spec.sigma / (static_cast<double>(n) * (spec.theta1 - spec.theta0)) * std::log(r);
}

/// Constant K such that the optimal rule reads
/// (xbar - theta0) / (sigma/sqrt(n)) >= K / (sigma sqrt(n)) + sqrt(n) |theta1 - theta0| / (2 sigma).
[[nodiscard]] inline double standardized_cutoff_constant(const DesignSpec& spec, double r) {
    validate(spec);
    return -spec.sigma * spec.sigma * std::log(r) / spec.separation();
}

[[nodiscard]] inline ErrorProfile error_profile_fixed_alpha(std::int64_t n, const DesignSpec& spec,
                                                            const ErrorWeights& w = ErrorWeights(1.0, 1.0)) {
    validate(spec);
    if (n < 1) throw domain_error("sample size must be >= 1");
    const double beta = normal_cdf(normal_quantile(1.0 - spec.alpha) -
                                   std::sqrt(static_cast<double>(n)) * spec.separation() / spec.sigma);
    return make_profile(spec.alpha, beta, w);
}

/// Errors of the optimal rule with ratio r; SERRORS uses a = 1, b = r.
[[nodiscard]] inline ErrorProfile error_profile_degroot(std::int64_t n, const DesignSpec& spec, double r) {
    const double cut = degroot_threshold(n, spec, r);
    const double scale = std::sqrt(static_cast<double>(n)) / spec.sigma;
    const double dir = spec.direction();
    // Reject when dir * (xbar - cut) > 0.
    const double alpha = std::exp(normal_log_tail(dir * (cut - spec.theta0) * scale));
    const double beta = std::exp(normal_log_cdf(dir * (cut - spec.theta1) * scale));
    return make_profile(alpha, beta, ErrorWeights::from_ratio(r));
}

struct AdaptiveAlphaRow {
    std::int64_t n = 0;
    double alpha_exact = 0.0;  ///< 1 - Phi(sqrt(n)/sigma)
    double alpha_mills = 0.0;  ///< phi(x)/x at x = sqrt(n)/sigma
};

[[nodiscard]] inline std::vector<AdaptiveAlphaRow> adaptive_alpha_curve(std::span<const std::int64_t> n_grid,
                                                                        double sigma) {
    if (!(sigma > 0.0)) throw domain_error("sigma must be positive");
    std::vector<AdaptiveAlphaRow> rows;
    rows.reserve(n_grid.size());
    for (const auto n : n_grid) {
        if (n < 1) throw domain_error("sample size must be >= 1");
        const double x = std::sqrt(static_cast<double>(n)) / sigma;
        rows.push_back({n, std::exp(normal_log_tail(x)), std::exp(normal_log_pdf(x) - std::log(x))});
    }
    return rows;
}

}  // namespace errsum
