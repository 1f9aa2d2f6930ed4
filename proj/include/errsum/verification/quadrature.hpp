#pragma once

// Globally adaptive 7/15-point Gauss-Kronrod integration with explicit break
// points. Nodes and weights come from Boost; the driver keeps a heap of
// panels and bisects the one with the largest error estimate until the total
// meets the tolerance or the panel budget runs out.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "errsum/errors.hpp"

namespace errsum {

inline constexpr double kQuadratureTolerance = 1e-10;
inline constexpr std::size_t kQuadratureMaxPanels = 2000;

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t panels = 0;
};

namespace detail {

struct Panel {
    double a, b, value, error;
    std::size_t segment;
    bool operator<(const Panel& o) const { return error < o.error; }
};

// f on a possibly infinite [a, b], seen through a change of variable t that
// lives on a finite interval.
struct Segment {
    double a, b;
    int kind;  // 0 finite, 1 [a, inf), 2 (-inf, b], 3 (-inf, inf)

    [[nodiscard]] double t_lo() const { return kind == 0 ? a : (kind == 3 ? -1.0 : 0.0); }
    [[nodiscard]] double t_hi() const { return kind == 0 ? b : 1.0; }

    template <class F>
    double eval(F& f, double t) const {
        switch (kind) {
            case 1: {
                const double s = 1.0 - t;
                return s == 0.0 ? 0.0 : f(a + t / s) / (s * s);
            }
            case 2: {
                const double s = 1.0 - t;
                return s == 0.0 ? 0.0 : f(b - t / s) / (s * s);
            }
            case 3: {
                const double s = 1.0 - t * t;
                return s == 0.0 ? 0.0 : f(t / s) * (1.0 + t * t) / (s * s);
            }
            default: return f(t);
        }
    }
};

inline Segment make_segment(double a, double b) {
    const bool ia = std::isinf(a);
    const bool ib = std::isinf(b);
    return {a, b, !ia && !ib ? 0 : (!ia ? 1 : (!ib ? 2 : 3))};
}

// 15-point Kronrod estimate on [lo, hi], with the embedded 7-point Gauss rule
// giving the error.
template <class F>
Panel kronrod_panel(F& f, const Segment& seg, std::size_t index, double lo, double hi) {
    using K = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    const auto& kx = K::abscissa();
    const auto& kw = K::weights();
    const auto& gw = G::weights();
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    const double f0 = seg.eval(f, c);
    double kron = f0 * kw[0];
    double gauss = f0 * gw[0];
    for (std::size_t i = 1; i < kx.size(); ++i) {
        const double fs = seg.eval(f, c - h * kx[i]) + seg.eval(f, c + h * kx[i]);
        kron += fs * kw[i];
        if (i % 2 == 0) gauss += fs * gw[i / 2];
    }
    return {lo, hi, h * kron, std::abs(h * (kron - gauss)), index};
}

}  // namespace detail

/// Integral of f over consecutive pieces [p0, p1], [p1, p2], ...; the outer
/// points may be infinite. The tolerance is relative to the magnitude of the
/// whole integral.
template <class F>
[[nodiscard]] QuadratureResult integrate_pieces(F&& f, const std::vector<double>& points,
                                                double tolerance = kQuadratureTolerance,
                                                std::size_t max_panels = kQuadratureMaxPanels) {
    std::vector<detail::Segment> segs;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (std::isnan(points[i]) || std::isnan(points[i + 1])) throw domain_error("integrate: NaN limit");
        if (!(points[i] < points[i + 1])) throw domain_error("integrate: points must increase");
        segs.push_back(detail::make_segment(points[i], points[i + 1]));
    }
    std::priority_queue<detail::Panel> heap;
    double value = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const auto p = detail::kronrod_panel(f, segs[i], i, segs[i].t_lo(), segs[i].t_hi());
        value += p.value;
        error += p.error;
        heap.push(p);
    }
    std::size_t panels = segs.size();
    while (!heap.empty() && panels < max_panels && error > tolerance * std::abs(value)) {
        const auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // cannot split further
        heap.pop();
        const auto& seg = segs[worst.segment];
        const auto left = detail::kronrod_panel(f, seg, worst.segment, worst.a, mid);
        const auto right = detail::kronrod_panel(f, seg, worst.segment, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }
    // Re-sum to shed the drift of the running updates.
    value = 0.0;
    error = 0.0;
    for (; !heap.empty(); heap.pop()) {
        value += heap.top().value;
        error += heap.top().error;
    }
    return {value, error, panels};
}

/// Integral of f over [a, b]; either end may be infinite.
template <class F>
[[nodiscard]] double integrate(F&& f, double a, double b, double tolerance = kQuadratureTolerance) {
    if (a == b) return 0.0;
    if (a > b) return -integrate(f, b, a, tolerance);
    return integrate_pieces(f, {a, b}, tolerance).value;
}

/// Integral of f over [a, b] split at the given interior points, so that
/// sharp features sit on panel edges.
template <class F>
[[nodiscard]] double integrate_with_breaks(F&& f, double a, double b, std::vector<double> breaks,
                                           double tolerance = kQuadratureTolerance) {
    if (a == b) return 0.0;
    std::erase_if(breaks, [&](double x) { return !(x > a && x < b); });
    breaks.push_back(a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    return integrate_pieces(f, breaks, tolerance).value;
}

}  // namespace errsum
