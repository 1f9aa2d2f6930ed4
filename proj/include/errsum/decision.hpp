#pragma once

// The optimal test: compare the evidence ratio with r = b/a.

#include <array>
#include <cmath>
#include <string>

#include "errsum/errors.hpp"

namespace errsum {

/// Weights on the Type I (a) and Type II (b) errors. Only r = b/a matters.
class ErrorWeights {
public:
    ErrorWeights(double a, double b) : a_(a), b_(b) {
        if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
            throw domain_error("error weights a and b must be positive and finite");
    }

    /// a = 1, b = r.
    [[nodiscard]] static ErrorWeights from_ratio(double r) { return ErrorWeights(1.0, r); }

    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double b() const noexcept { return b_; }
    [[nodiscard]] double ratio() const noexcept { return b_ / a_; }
    [[nodiscard]] double log_ratio() const noexcept { return std::log(b_) - std::log(a_); }

private:
    double a_;
    double b_;
};

enum class Verdict { reject_h0, accept_h0, indifferent };

[[nodiscard]] inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::reject_h0: return "RejectH0";
        case Verdict::accept_h0: return "AcceptH0";
        case Verdict::indifferent: return "Indifferent";
    }
    return "?";
}

enum class EvidenceDirection { against_h0, for_h0 };

[[nodiscard]] inline const char* to_string(EvidenceDirection d) {
    return d == EvidenceDirection::against_h0 ? "against_H0" : "for_H0";
}

/// A grade on Jeffreys' table. Grade numbers follow the table (there is no
/// grade 3). Ratios above 1 are graded by mirroring, which is an extension of
/// the table; `mirrored` marks it.
struct JeffreysGrade {
    int grade = 0;
    EvidenceDirection direction = EvidenceDirection::for_h0;
    std::string label;
    bool mirrored = false;

    /// Position in the table counting rows 0..5, i.e. the numbering of
    /// Jeffreys' original scale where "decisive" is 5.
    [[nodiscard]] int contiguous_grade() const { return grade >= 4 ? grade - 1 : grade; }
};

/// Lower edges of grades 1, 2, 4, 5 on the "against" side. A ratio equal to
/// an edge belongs to the stronger grade.
inline constexpr std::array<double, 4> kJeffreysEdges = {
    0.31622776601683794,   // 10^-1/2
    0.1,                   // 10^-1
    0.031622776601683791,  // 10^-3/2
    0.01,                  // 10^-2
};

namespace detail {

// Grade of a ratio below 1, given its (negative) logarithm.
inline int against_grade(double log_ratio) {
    constexpr std::array<int, 5> grades = {1, 2, 4, 5, 6};
    std::size_t i = 0;
    while (i < kJeffreysEdges.size() && log_ratio <= std::log(kJeffreysEdges[i])) ++i;
    return grades[i];
}

inline const char* strength_word(int grade) {
    switch (grade) {
        case 1: return "Mild";
        case 2: return "Substantial";
        case 4: return "Strong";
        case 5: return "Very Strong";
        case 6: return "Decisive";
        default: return "";
    }
}

inline JeffreysGrade make_grade(int g, bool against) {
    if (against) return {g, EvidenceDirection::against_h0, std::string(strength_word(g)) + " Evidence against H0", false};
    if (g == 1) return {1, EvidenceDirection::for_h0, "Null Supported", true};
    return {g, EvidenceDirection::for_h0, std::string(strength_word(g)) + " Evidence for H0", true};
}

}  // namespace detail

/// Grade from ln(evidence0/evidence1); safe where the ratio itself over- or
/// underflows. Ratios r and 1/r always get the same grade number.
[[nodiscard]] inline JeffreysGrade jeffreys_grade_log(double log_ratio_01) {
    if (std::isnan(log_ratio_01)) throw domain_error("jeffreys_grade: NaN ratio");
    if (log_ratio_01 == 0.0) return {0, EvidenceDirection::for_h0, "Null Supported", false};
    if (log_ratio_01 < 0.0) return detail::make_grade(detail::against_grade(log_ratio_01), true);
    return detail::make_grade(detail::against_grade(-log_ratio_01), false);
}

/// Same grading on the linear scale, so edges are compared without log rounding.
[[nodiscard]] inline JeffreysGrade jeffreys_grade(double ratio_01) {
    if (!(ratio_01 > 0.0)) throw domain_error("jeffreys_grade: ratio must be positive");
    if (ratio_01 == 1.0 || !std::isfinite(ratio_01)) return jeffreys_grade_log(std::log(ratio_01));
    constexpr std::array<int, 5> grades = {1, 2, 4, 5, 6};
    constexpr std::array<double, 4> upper_edges = {3.1622776601683795, 10.0, 31.622776601683793, 100.0};
    std::size_t i = 0;
    if (ratio_01 < 1.0) {
        while (i < kJeffreysEdges.size() && ratio_01 <= kJeffreysEdges[i]) ++i;
    } else {
        while (i < upper_edges.size() && ratio_01 >= upper_edges[i]) ++i;
    }
    return detail::make_grade(grades[i], ratio_01 < 1.0);
}

/// |log ratio - ln r| at or below this is a tie.
inline constexpr double kTieTolerance = 1e-12;

struct Decision {
    Verdict verdict = Verdict::indifferent;
    double log_ratio_01 = 0.0;
    double r = 1.0;
    JeffreysGrade grade;
};

/// Reject H0 when evidence0/evidence1 < b/a, accept when >, tie otherwise.
[[nodiscard]] inline Decision decide(double log_ratio_01, const ErrorWeights& weights) {
    if (!std::isfinite(log_ratio_01)) throw domain_error("decide: log ratio must be finite");
    const double threshold = weights.log_ratio();
    Verdict v = Verdict::indifferent;
    if (std::abs(log_ratio_01 - threshold) > kTieTolerance)
        v = log_ratio_01 < threshold ? Verdict::reject_h0 : Verdict::accept_h0;
    return {v, log_ratio_01, weights.ratio(), jeffreys_grade_log(log_ratio_01)};
}

/// r = b/a = P(H1) L0 / (P(H0) L1), with L0 the loss of wrongly accepting H0
/// and L1 the loss of wrongly rejecting it.
[[nodiscard]] inline double elicit_ratio(double p_h0, double loss_false_accept, double loss_false_reject) {
    if (!(p_h0 > 0.0 && p_h0 < 1.0)) throw domain_error("elicit_ratio: P(H0) must lie in (0, 1)");
    if (!(loss_false_accept > 0.0) || !(loss_false_reject > 0.0))
        throw domain_error("elicit_ratio: losses must be positive");
    return (1.0 - p_h0) * loss_false_accept / (p_h0 * loss_false_reject);
}

}  // namespace errsum
