#pragma once

// For the optimal test, alpha / (1 - beta) <= b/a, hence alpha <= b/a.

#include <cmath>

#include "errsum/design.hpp"
#include "errsum/errors.hpp"

namespace errsum {

struct Lemma2Report {
    double alpha = 0.0;
    double beta = 0.0;
    double r = 1.0;
    double ratio_margin = 0.0;  ///< r (1 - beta) - alpha
    double alpha_margin = 0.0;  ///< r - alpha
    double slack = 0.0;         ///< allowance for sampling error
    bool ratio_bound_holds = false;
    bool alpha_bound_holds = false;

    [[nodiscard]] bool holds() const { return ratio_bound_holds && alpha_bound_holds; }
};

/// Checks both bounds. With standard errors the allowance is `k_se` combined
/// standard errors; for exact profiles only rounding is allowed for.
[[nodiscard]] inline Lemma2Report check_lemma2(const ErrorProfile& profile, double r, double alpha_se = 0.0,
                                               double beta_se = 0.0, double k_se = 3.0) {
    if (!(r > 0.0)) throw domain_error("check_lemma2: r must be positive");
    Lemma2Report rep;
    rep.alpha = profile.alpha;
    rep.beta = profile.beta;
    rep.r = r;
    rep.ratio_margin = r * (1.0 - profile.beta) - profile.alpha;
    rep.alpha_margin = r - profile.alpha;
    const double rounding = 1e-14 * std::max(1.0, r);
    rep.slack = k_se * std::sqrt(alpha_se * alpha_se + r * r * beta_se * beta_se) + rounding;
    rep.ratio_bound_holds = rep.ratio_margin >= -rep.slack;
    rep.alpha_bound_holds = rep.alpha_margin >= -(k_se * alpha_se + rounding);
    return rep;
}

}  // namespace errsum
