#pragma once

// Finite sample spaces, where the optimal test can be checked against an
// exhaustive search over every rejection region.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "errsum/decision.hpp"
#include "errsum/design.hpp"
#include "errsum/errors.hpp"

namespace errsum {

/// Two probability mass functions over K outcomes (the evidences under H0 and
/// H1, stored as logs) together with the error weights.
class DiscreteTestProblem {
public:
    DiscreteTestProblem(std::vector<double> log_evidence0, std::vector<double> log_evidence1, ErrorWeights weights)
        : log0_(std::move(log_evidence0)), log1_(std::move(log_evidence1)), weights_(weights) {
        if (log0_.empty() || log0_.size() != log1_.size())
            throw domain_error("discrete problem: evidence vectors must be non-empty and of equal length");
        p0_.reserve(log0_.size());
        p1_.reserve(log1_.size());
        double s0 = 0.0;
        double s1 = 0.0;
        for (std::size_t k = 0; k < log0_.size(); ++k) {
            if (std::isnan(log0_[k]) || std::isnan(log1_[k]) || log0_[k] > 0.0 || log1_[k] > 0.0)
                throw domain_error("discrete problem: log evidences must be <= 0");
            p0_.push_back(std::exp(log0_[k]));
            p1_.push_back(std::exp(log1_[k]));
            s0 += p0_.back();
            s1 += p1_.back();
        }
        if (std::abs(s0 - 1.0) > 1e-9 || std::abs(s1 - 1.0) > 1e-9)
            throw domain_error("discrete problem: each evidence must sum to 1 over the outcomes");
    }

    /// Builds a problem from probabilities, keeping them exactly as given.
    [[nodiscard]] static DiscreteTestProblem from_probabilities(const std::vector<double>& p0,
                                                                const std::vector<double>& p1, ErrorWeights weights) {
        std::vector<double> l0, l1;
        for (double p : p0) l0.push_back(std::log(p));
        for (double p : p1) l1.push_back(std::log(p));
        DiscreteTestProblem out(std::move(l0), std::move(l1), weights);
        if (p0.size() == out.p0_.size() && p1.size() == out.p1_.size()) {
            out.p0_ = p0;
            out.p1_ = p1;
        }
        return out;
    }

    [[nodiscard]] std::size_t size() const noexcept { return p0_.size(); }
    [[nodiscard]] const ErrorWeights& weights() const noexcept { return weights_; }
    [[nodiscard]] double evidence0(std::size_t k) const { return p0_.at(k); }
    [[nodiscard]] double evidence1(std::size_t k) const { return p1_.at(k); }
    [[nodiscard]] double log_evidence0(std::size_t k) const { return log0_.at(k); }
    [[nodiscard]] const std::vector<double>& probabilities0() const noexcept { return p0_; }
    [[nodiscard]] const std::vector<double>& probabilities1() const noexcept { return p1_; }
    [[nodiscard]] double log_evidence1(std::size_t k) const { return log1_.at(k); }

private:
    std::vector<double> log0_, log1_;
    std::vector<double> p0_, p1_;
    ErrorWeights weights_;
};

/// Membership flags over the outcomes of a discrete problem.
struct RejectionSet {
    std::vector<bool> member;

    [[nodiscard]] static RejectionSet from_mask(std::uint64_t mask, std::size_t k) {
        RejectionSet r;
        r.member.resize(k);
        for (std::size_t i = 0; i < k; ++i) r.member[i] = (mask >> i) & 1U;
        return r;
    }

    [[nodiscard]] std::vector<std::size_t> outcomes() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < member.size(); ++i)
            if (member[i]) out.push_back(i);
        return out;
    }

    friend bool operator==(const RejectionSet&, const RejectionSet&) = default;
};

/// Exact alpha = sum of evidence0 over R, beta = sum of evidence1 off R.
[[nodiscard]] inline ErrorProfile exact_error_profile(const DiscreteTestProblem& p, const RejectionSet& r) {
    if (r.member.size() != p.size()) throw domain_error("rejection set size does not match the problem");
    double alpha = 0.0;
    double beta = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (r.member[k]) alpha += p.evidence0(k);
        else beta += p.evidence1(k);
    }
    return make_profile(alpha, beta, p.weights());
}

/// Pointwise optimal rule: reject outcome k iff a * evidence0 < b * evidence1.
[[nodiscard]] inline RejectionSet lemma1_rule_discrete(const DiscreteTestProblem& p) {
    const double la = std::log(p.weights().a());
    const double lb = std::log(p.weights().b());
    RejectionSet r;
    r.member.resize(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) r.member[k] = la + p.log_evidence0(k) < lb + p.log_evidence1(k);
    return r;
}

inline constexpr std::size_t kMaxBruteForceOutcomes = 24;

struct BruteForceResult {
    RejectionSet rejection_set;
    double min_serrors = 0.0;
    ErrorProfile profile;
};

/// Evaluates SERRORS for all 2^K rejection regions. Ties go to the region
/// with the smallest bitmask, outcome k being bit k.
[[nodiscard]] inline BruteForceResult brute_force_optimal_test(const DiscreteTestProblem& p) {
    const std::size_t k = p.size();
    if (k > kMaxBruteForceOutcomes)
        throw domain_error("brute_force_optimal_test: " + std::to_string(k) + " outcomes exceeds the limit of " +
                           std::to_string(kMaxBruteForceOutcomes));
    const double a = p.weights().a();
    const double b = p.weights().b();
    const std::uint64_t count = std::uint64_t{1} << k;
    const auto& p0 = p.probabilities0();
    const auto& p1 = p.probabilities1();
    std::uint64_t best_mask = 0;
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        double alpha = 0.0;
        double beta = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            if ((mask >> i) & 1U) alpha += p0[i];
            else beta += p1[i];
        }
        const double s = a * alpha + b * beta;
        if (mask == 0 || s < best) {
            best = s;
            best_mask = mask;
        }
    }
    auto set = RejectionSet::from_mask(best_mask, k);
    auto profile = exact_error_profile(p, set);
    return {std::move(set), best, profile};
}

}  // namespace errsum
