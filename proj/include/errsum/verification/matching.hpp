#pragma once

// Predictive matching of improper priors on minimal training samples.
//
// Location-scale: with prior 1/sigma on (mu, sigma), the predictive of two
// distinct observations is 1/(2|x2 - x1|) whatever the standardized density f.
// Jeffreys normal: for one observation, the scale-only null (prior 1/sigma)
// and the location-scale alternative (Cauchy-type prior on mu) give the same
// predictive, 1/(2|x - mu0|).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "errsum/errors.hpp"
#include "errsum/special_functions.hpp"
#include "errsum/verification/quadrature.hpp"

namespace errsum {

enum class LocationScaleFamily { normal, cauchy };

[[nodiscard]] inline const char* to_string(LocationScaleFamily f) {
    return f == LocationScaleFamily::normal ? "normal" : "cauchy";
}

namespace detail {

inline double standard_density(LocationScaleFamily f, double z) {
    if (f == LocationScaleFamily::normal) return normal_pdf(z);
    return 1.0 / (std::numbers::pi * (1.0 + z * z));
}

// Outer integrals run over t = ln(sigma) within this many units of ln(scale).
inline constexpr double kLogSigmaHalfWidth = 40.0;

// Standard normal mass beyond this many units is below double precision.
inline constexpr double kNormalHalfWidth = 40.0;

}  // namespace detail

/// Integral over mu and sigma > 0 of sigma^-3 f((x1 - mu)/sigma) f((x2 - mu)/sigma).
[[nodiscard]] inline double predictive_matching_location_scale(LocationScaleFamily family, double x1, double x2) {
    if (!std::isfinite(x1) || !std::isfinite(x2)) throw domain_error("predictive matching: data must be finite");
    if (x1 == x2) throw divergence_error("predictive matching: integral diverges when x1 == x2");
    const double h = std::abs(x2 - x1) / 2.0;
    constexpr double inf = std::numeric_limits<double>::infinity();
    // mu = midpoint + sigma v turns the inner integral into
    // g(u) = integral of f(x) f(x + 2u) dx, u = h / sigma, which is symmetric
    // about x = -u.
    auto g = [family, inf](double u) {
        auto inner = [family, u](double x) {
            return detail::standard_density(family, x) * detail::standard_density(family, x + 2.0 * u);
        };
        std::vector<double> points{-u, 0.0};
        for (double p = 1.0; p < 1e3 * std::max(u, 1.0); p *= 10.0) {
            if (p < u) points.insert(points.begin() + 1, -p);
            points.push_back(p);
        }
        points.push_back(inf);
        return 2.0 * integrate_pieces(inner, points).value;
    };
    auto outer = [&](double t) {
        const double inv_sigma = std::exp(-t);
        return inv_sigma * g(h * inv_sigma);
    };
    const double c = std::log(h);
    return integrate_with_breaks(outer, c - detail::kLogSigmaHalfWidth, c + detail::kLogSigmaHalfWidth, {c});
}

[[nodiscard]] inline double predictive_matching_exact(double x1, double x2) {
    if (x1 == x2) throw divergence_error("predictive matching: integral diverges when x1 == x2");
    return 1.0 / (2.0 * std::abs(x2 - x1));
}

struct JeffreysPredictives {
    double m0 = 0.0;  ///< scale-only null, mean fixed at mu0
    double m1 = 0.0;  ///< location-scale alternative
};

/// m0 = integral of N(x | mu0, sigma^2) / sigma over sigma;
/// m1 = double integral of N(x | mu, sigma^2) / sigma * 1/(pi sigma (1 + (mu - mu0)^2/sigma^2)).
[[nodiscard]] inline JeffreysPredictives predictive_matching_jeffreys_normal(double x, double mu0) {
    if (!std::isfinite(x) || !std::isfinite(mu0)) throw domain_error("predictive matching: data must be finite");
    if (x == mu0) throw divergence_error("predictive matching: m0 diverges when x == mu0");
    const double d = std::abs(x - mu0);
    const double c = std::log(d);
    auto f0 = [d](double t) {
        const double inv_sigma = std::exp(-t);
        return inv_sigma * normal_pdf(d * inv_sigma);
    };
    // mu = x - sigma y.
    auto f1 = [d](double t) {
        const double inv_sigma = std::exp(-t);
        const double z = d * inv_sigma;
        auto inner = [z](double y) { return normal_pdf(y) * detail::standard_density(LocationScaleFamily::cauchy, z - y); };
        return inv_sigma * integrate_with_breaks(inner, -detail::kNormalHalfWidth, detail::kNormalHalfWidth, {0.0, z});
    };
    const double lo = c - detail::kLogSigmaHalfWidth;
    const double hi = c + detail::kLogSigmaHalfWidth;
    return {integrate_with_breaks(f0, lo, hi, {c}), integrate_with_breaks(f1, lo, hi, {c})};
}

}  // namespace errsum
