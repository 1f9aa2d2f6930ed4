#pragma once

// Scalar kernels. Anything that can over- or underflow is computed on the
// natural-log scale; callers combine magnitudes with log_sum_exp and friends.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "errsum/errors.hpp"

namespace errsum {

inline constexpr double kLnSqrt2Pi = 0.91893853320467274178032973640562;

/// Above this value of a+b the incomplete beta is replaced by the normal
/// approximation of the Beta distribution, evaluated with log tails.
inline constexpr double kLargeBetaThreshold = 1e6;

/// A positive magnitude stored as its natural logarithm.
struct LogReal {
    double value = -std::numeric_limits<double>::infinity();

    [[nodiscard]] static LogReal from_linear(double x) { return LogReal{std::log(x)}; }
    [[nodiscard]] static LogReal zero() { return LogReal{}; }
    [[nodiscard]] double linear() const { return std::exp(value); }

    friend LogReal operator*(LogReal a, LogReal b) { return LogReal{a.value + b.value}; }
    friend LogReal operator/(LogReal a, LogReal b) { return LogReal{a.value - b.value}; }
    friend LogReal operator+(LogReal a, LogReal b);
    friend bool operator==(LogReal, LogReal) = default;
};

/// ln(e^a + e^b) without overflow.
[[nodiscard]] inline double log_sum_exp(double a, double b) {
    if (a < b) std::swap(a, b);
    if (a == -std::numeric_limits<double>::infinity()) return a;
    if (a == std::numeric_limits<double>::infinity()) return a;
    return a + std::log1p(std::exp(b - a));
}

/// ln(e^a - e^b) for a >= b.
[[nodiscard]] inline double log_diff_exp(double a, double b) {
    if (b > a) throw domain_error("log_diff_exp: requires a >= b");
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double d = b - a;
    // log1p(-e^d) loses accuracy near d = 0; log(-expm1(d)) is the stable branch there.
    return a + (d > -std::numbers::ln2 ? std::log(-std::expm1(d)) : std::log1p(-std::exp(d)));
}

inline LogReal operator+(LogReal a, LogReal b) { return LogReal{log_sum_exp(a.value, b.value)}; }

namespace detail {

// lgamma(x) - Stirling's approximation, for x >= 10.
inline double stirling_correction(double x) {
    constexpr double c[] = {1.0 / 12.0,          -1.0 / 360.0,  1.0 / 1260.0, -1.0 / 1680.0,
                            1.0 / 1188.0,        -691.0 / 360360.0, 1.0 / 156.0};
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double sum = 0.0;
    for (int k = 6; k >= 0; --k) sum = sum * inv2 + c[k];
    return sum * inv;
}

}  // namespace detail

[[nodiscard]] inline double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw domain_error("log_gamma: argument must be positive and finite");
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

/// ln B(a,b). Arguments are put in canonical order first, so the result is
/// bit-for-bit symmetric. Large arguments use the Stirling difference form to
/// avoid cancelling three lgamma values of order a*ln(a).
[[nodiscard]] inline double log_beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw domain_error("log_beta: arguments must be positive and finite");
    const double p = std::min(a, b);
    const double q = std::max(a, b);
    const double sum = p + q;
    if (p >= 10.0) {
        const double corr =
            detail::stirling_correction(p) + detail::stirling_correction(q) - detail::stirling_correction(sum);
        return -0.5 * std::log(q) + kLnSqrt2Pi + corr + (p - 0.5) * std::log(p / sum) +
               q * std::log1p(-p / sum);
    }
    if (q >= 10.0) {
        const double corr = detail::stirling_correction(q) - detail::stirling_correction(sum);
        return log_gamma(p) + corr + p - p * std::log(sum) + (q - 0.5) * std::log1p(-p / sum);
    }
    return log_gamma(p) + log_gamma(q) - log_gamma(sum);
}

[[nodiscard]] inline double normal_pdf(double z) { return std::exp(-0.5 * z * z - kLnSqrt2Pi); }

[[nodiscard]] inline double normal_log_pdf(double z) { return -0.5 * z * z - kLnSqrt2Pi; }

/// Log density of N(x | mean, variance).
[[nodiscard]] inline double normal_log_density(double x, double mean, double variance) {
    const double d = x - mean;
    return -0.5 * d * d / variance - 0.5 * std::log(variance) - kLnSqrt2Pi;
}

[[nodiscard]] inline double normal_cdf(double z) {
    if (std::isnan(z)) throw domain_error("normal_cdf: NaN argument");
    if (z < 0.0) return 0.5 * std::erfc(-z / std::numbers::sqrt2);
    return 1.0 - 0.5 * std::erfc(z / std::numbers::sqrt2);
}

/// ln(1 - Phi(z)). Uses erfc while it is representable, then the asymptotic
/// Mills-ratio expansion phi(z)/z * (1 - 1/z^2 + 3/z^4 - ...).
[[nodiscard]] inline double normal_log_tail(double z) {
    if (std::isnan(z)) throw domain_error("normal_log_tail: NaN argument");
    if (z < 0.0) return std::log1p(-0.5 * std::erfc(-z / std::numbers::sqrt2));
    if (z <= 30.0) return std::log(0.5 * std::erfc(z / std::numbers::sqrt2));
    const double inv2 = 1.0 / (z * z);
    double term = 1.0;
    double series = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double next = -term * (2.0 * k - 1.0) * inv2;
        if (std::abs(next) >= std::abs(term)) break;  // asymptotic: stop at the smallest term
        term = next;
        series += term;
        if (std::abs(term) < 1e-17 * std::abs(series)) break;
    }
    return normal_log_pdf(z) - std::log(z) + std::log(series);
}

/// ln Phi(z).
[[nodiscard]] inline double normal_log_cdf(double z) { return normal_log_tail(-z); }

[[nodiscard]] inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw domain_error("normal_quantile: p must lie in (0, 1)");
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

namespace detail {

// Modified Lentz evaluation of the incomplete beta continued fraction.
inline double beta_continued_fraction(double x, double a, double b) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 4e-16;
    const int max_iter = 1000 + static_cast<int>(20.0 * std::sqrt(std::max(a, b)));
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    throw domain_error("regularized_incomplete_beta: continued fraction did not converge");
}

// ln I_x(a,b) via the continued fraction, valid for x < (a+1)/(a+b+2).
inline double log_ibeta_lower_cf(double x, double a, double b) {
    const double front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b) - std::log(a);
    return front + std::log(beta_continued_fraction(x, a, b));
}

struct BetaNormalApprox {
    double mean;
    double sd;
};

inline BetaNormalApprox beta_normal_approx(double a, double b) {
    const double s = a + b;
    return {a / s, std::sqrt(a * b / (s * s * (s + 1.0)))};
}

}  // namespace detail

/// ln I_x(a,b) and ln(1 - I_x(a,b)), each accurate where the other is near 1.
struct LogBetaTails {
    double lower;  ///< ln I_x(a,b)
    double upper;  ///< ln(1 - I_x(a,b))
};

[[nodiscard]] inline LogBetaTails log_incomplete_beta_tails(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw domain_error("regularized_incomplete_beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw domain_error("regularized_incomplete_beta: x must lie in [0, 1]");
    constexpr double ninf = -std::numeric_limits<double>::infinity();
    if (x == 0.0) return {ninf, 0.0};
    if (x == 1.0) return {0.0, ninf};
    if (a + b > kLargeBetaThreshold) {
        const auto approx = detail::beta_normal_approx(a, b);
        const double z = (x - approx.mean) / approx.sd;
        return {normal_log_cdf(z), normal_log_tail(z)};
    }
    if (x < (a + 1.0) / (a + b + 2.0)) {
        const double lower = std::min(0.0, detail::log_ibeta_lower_cf(x, a, b));
        return {lower, log_diff_exp(0.0, lower)};
    }
    const double upper = std::min(0.0, detail::log_ibeta_lower_cf(1.0 - x, b, a));
    return {log_diff_exp(0.0, upper), upper};
}

/// I_x(a,b), the regularized incomplete beta function.
[[nodiscard]] inline double regularized_incomplete_beta(double x, double a, double b) {
    const auto tails = log_incomplete_beta_tails(x, a, b);
    return tails.lower > -0.7 ? -std::expm1(tails.upper) : std::exp(tails.lower);
}

/// ln of the Beta(a,b) probability of the open interval (lo, hi).
[[nodiscard]] inline double log_beta_interval_mass(double lo, double hi, double a, double b) {
    if (!(lo < hi)) throw domain_error("log_beta_interval_mass: requires lo < hi");
    lo = std::max(lo, 0.0);
    hi = std::min(hi, 1.0);
    const auto at_lo = log_incomplete_beta_tails(lo, a, b);
    const auto at_hi = log_incomplete_beta_tails(hi, a, b);
    // Difference of whichever tails are smaller, so nothing cancels to zero.
    if (at_hi.lower < at_lo.upper) return log_diff_exp(at_hi.lower, at_lo.lower);
    return log_diff_exp(at_lo.upper, at_hi.upper);
}

/// ln of the Beta(a,b) probability outside [lo, hi].
[[nodiscard]] inline double log_beta_outside_mass(double lo, double hi, double a, double b) {
    if (!(lo < hi)) throw domain_error("log_beta_outside_mass: requires lo < hi");
    const double left = lo <= 0.0 ? -std::numeric_limits<double>::infinity()
                                  : log_incomplete_beta_tails(lo, a, b).lower;
    const double right = hi >= 1.0 ? -std::numeric_limits<double>::infinity()
                                   : log_incomplete_beta_tails(hi, a, b).upper;
    return log_sum_exp(left, right);
}

/// ln of the standard normal probability of (lo, hi).
[[nodiscard]] inline double normal_log_interval_mass(double lo, double hi) {
    if (!(lo < hi)) throw domain_error("normal_log_interval_mass: requires lo < hi");
    if (lo > 0.0) return log_diff_exp(normal_log_tail(lo), normal_log_tail(hi));
    if (hi < 0.0) return log_diff_exp(normal_log_cdf(hi), normal_log_cdf(lo));
    return std::log1p(-(std::exp(normal_log_cdf(lo)) + std::exp(normal_log_tail(hi))));
}

/// ln of the standard normal probability outside [lo, hi].
[[nodiscard]] inline double normal_log_outside_mass(double lo, double hi) {
    if (!(lo < hi)) throw domain_error("normal_log_outside_mass: requires lo < hi");
    return log_sum_exp(normal_log_cdf(lo), normal_log_tail(hi));
}

}  // namespace errsum
