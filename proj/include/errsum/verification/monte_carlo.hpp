#pragma once

// Monte Carlo estimates of weight-averaged error rates. A trial draws theta
// from the hypothesis' weight, then data given theta, then applies the rule.
//
// Reproducibility: trials are cut into fixed-size blocks and block b of
// hypothesis j always uses an engine seeded from (seed, j, b). Workers only
// decide which thread runs a block, so estimates do not depend on the
// worker count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <exception>
#include <random>
#include <thread>
#include <vector>

#include "errsum/decision.hpp"
#include "errsum/design.hpp"
#include "errsum/errors.hpp"
#include "errsum/evidence.hpp"

namespace errsum {

struct MonteCarloConfig {
    std::uint64_t trials = 100'000;  ///< per hypothesis
    std::uint64_t seed = 20130530;
    unsigned workers = 1;

    static constexpr std::uint64_t block_size = 4096;
};

using RandomEngine = std::mt19937_64;

/// Engine for block `block` of hypothesis `stream` under `seed`.
[[nodiscard]] inline RandomEngine block_engine(std::uint64_t seed, std::uint32_t stream, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream,
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    return RandomEngine(seq);
}

/// Draws theta from a proper weight. Improper or unresolved weights are refused.
template <class URBG>
[[nodiscard]] double sample_weight(const WeightSpec& w, URBG& rng) {
    if (const auto* p = std::get_if<weight::PointMass>(&w)) return p->theta;
    if (const auto* t = std::get_if<weight::TwoPointMass>(&w)) {
        std::bernoulli_distribution coin(0.5);
        return coin(rng) ? t->center + t->delta : t->center - t->delta;
    }
    if (const auto* u = std::get_if<weight::Uniform>(&w)) return std::uniform_real_distribution<double>(u->lo, u->hi)(rng);
    if (const auto* b = std::get_if<weight::Beta>(&w)) {
        const double x = std::gamma_distribution<double>(b->a, 1.0)(rng);
        const double y = std::gamma_distribution<double>(b->b, 1.0)(rng);
        return x / (x + y);
    }
    if (const auto* n = std::get_if<weight::Normal>(&w))
        return std::normal_distribution<double>(n->mean, std::sqrt(n->variance))(rng);
    throw domain_error("cannot sample from weight " + describe(w));
}

inline void require_samplable(const WeightSpec& w) {
    validate(w);
    if (!is_proper(w)) throw domain_error("Monte Carlo needs proper weights; got " + describe(w));
    if (std::holds_alternative<weight::DiracAtNull>(w))
        throw domain_error("Monte Carlo needs dirac_at_null resolved to a point mass");
}

/// Anything that can generate a data set under either hypothesis.
template <class M>
concept SamplingModel = requires(const M& m, Hypothesis h, RandomEngine& rng) {
    typename M::data_type;
    { m.sample(h, rng) } -> std::convertible_to<typename M::data_type>;
};

/// n normal draws with known sigma, summarized by their mean.
struct NormalMeanModel {
    using data_type = NormalSummary;

    NormalMeanModel(double sigma, std::int64_t n, WeightSpec prior0, WeightSpec prior1)
        : sigma_(sigma), n_(n), prior0_(std::move(prior0)), prior1_(std::move(prior1)) {
        validate(NormalSummary{0.0, n, sigma});
        require_samplable(prior0_);
        require_samplable(prior1_);
    }

    template <class URBG>
    [[nodiscard]] NormalSummary sample(Hypothesis h, URBG& rng) const {
        const double theta = sample_weight(h == Hypothesis::null ? prior0_ : prior1_, rng);
        const double se = sigma_ / std::sqrt(static_cast<double>(n_));
        return {std::normal_distribution<double>(theta, se)(rng), n_, sigma_};
    }

private:
    double sigma_;
    std::int64_t n_;
    WeightSpec prior0_, prior1_;
};

/// A fixed number of Bernoulli trials.
struct BinomialModel {
    using data_type = CountSummary;

    BinomialModel(std::int64_t trials, WeightSpec prior0, WeightSpec prior1)
        : trials_(trials), prior0_(std::move(prior0)), prior1_(std::move(prior1)) {
        if (trials < 1) throw domain_error("binomial model needs at least one trial");
        require_samplable(prior0_);
        require_samplable(prior1_);
    }

    template <class URBG>
    [[nodiscard]] CountSummary sample(Hypothesis h, URBG& rng) const {
        const double theta = sample_weight(h == Hypothesis::null ? prior0_ : prior1_, rng);
        if (theta < 0.0 || theta > 1.0) throw domain_error("binomial model: weight produced theta outside [0, 1]");
        return {std::binomial_distribution<std::int64_t>(trials_, theta)(rng), trials_};
    }

private:
    std::int64_t trials_;
    WeightSpec prior0_, prior1_;
};

struct McErrorProfile {
    ErrorProfile profile;
    double alpha_se = 0.0;
    double beta_se = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t rejections_under_h0 = 0;
    std::uint64_t acceptances_under_h1 = 0;
};

/// Estimates alpha and beta of `rejects` (data -> true when H0 is rejected).
template <SamplingModel Model, class Rule>
    requires std::predicate<const Rule&, const typename Model::data_type&>
[[nodiscard]] McErrorProfile mc_error_profile(const Rule& rejects, const Model& model, const MonteCarloConfig& config,
                                              const ErrorWeights& weights = ErrorWeights(1.0, 1.0)) {
    if (config.trials == 0) throw domain_error("Monte Carlo needs at least one trial");
    const std::uint64_t bs = MonteCarloConfig::block_size;
    const std::uint64_t blocks = (config.trials + bs - 1) / bs;
    // counts[2*b + j]: errors of hypothesis j in block b.
    std::vector<std::uint64_t> counts(2 * blocks, 0);

    auto run_block = [&](std::uint64_t b) {
        const std::uint64_t begin = b * bs;
        const std::uint64_t end = std::min(config.trials, begin + bs);
        for (std::uint32_t j = 0; j < 2; ++j) {
            const auto h = j == 0 ? Hypothesis::null : Hypothesis::alternative;
            auto rng = block_engine(config.seed, j, b);
            std::uint64_t errors = 0;
            for (std::uint64_t t = begin; t < end; ++t) {
                const bool reject = rejects(model.sample(h, rng));
                errors += (h == Hypothesis::null) ? reject : !reject;
            }
            counts[2 * b + j] = errors;
        }
    };

    const unsigned workers = std::max(1U, std::min<unsigned>(config.workers, static_cast<unsigned>(blocks)));
    if (workers == 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::exception_ptr> failures(workers);
        {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::uint64_t b = next++; b < blocks; b = next++) run_block(b);
                    } catch (...) {
                        failures[w] = std::current_exception();
                    }
                });
            }
        }
        for (const auto& f : failures)
            if (f) std::rethrow_exception(f);
    }

    McErrorProfile out;
    out.trials = config.trials;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        out.rejections_under_h0 += counts[2 * b];
        out.acceptances_under_h1 += counts[2 * b + 1];
    }
    const double t = static_cast<double>(config.trials);
    const double alpha = static_cast<double>(out.rejections_under_h0) / t;
    const double beta = static_cast<double>(out.acceptances_under_h1) / t;
    out.profile = make_profile(alpha, beta, weights);
    out.alpha_se = std::sqrt(alpha * (1.0 - alpha) / t);
    out.beta_se = std::sqrt(beta * (1.0 - beta) / t);
    return out;
}

}  // namespace errsum
