#pragma once

// Scenario files: one hypothesis test described in JSON, and the record
// produced by running it.
//
// {
//   "schema_version": 1,
//   "name": "coin",
//   "family": "binomial" | "negative_binomial" | "normal",
//   "hypotheses": { "null": REGION, "alternative": REGION },
//   "weights":    { "null": WEIGHT, "alternative": WEIGHT },
//   "data": { "successes": 9, "trials": 12 }  or  { "mean": 0.1, "n": 20, "sigma": 3 },
//   "error_weights": { "a": 1, "b": 1 } | { "ratio": 0.63 }
//                  | { "elicit": { "prior_null": 0.5, "loss_false_accept": 0.63, "loss_false_reject": 1 } }
// }
// REGION: {"type": "point", "value"} | {"type": "interval", "lo", "hi"}
//       | {"type": "complement_of_point", "value"} | {"type": "complement_of_interval", "lo", "hi"}
// WEIGHT: {"type": "point_mass", "theta"} | {"type": "two_point_mass", "center", "delta"}
//       | {"type": "uniform", "lo", "hi"} | {"type": "beta", "a", "b"}
//       | {"type": "normal", "mean", "variance"} | {"type": "dirac_at_null"}

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "errsum/decision.hpp"
#include "errsum/errors.hpp"
#include "errsum/evidence.hpp"

namespace errsum {

using Json = nlohmann::ordered_json;

inline constexpr int kScenarioSchemaVersion = 1;

struct Scenario {
    std::string name;
    HypothesisPair hypotheses;
    WeightSpec weight0 = weight::DiracAtNull{};
    WeightSpec weight1 = weight::DiracAtNull{};
    DataSummary data = CountSummary{};
    ErrorWeights error_weights{1.0, 1.0};
    Json source;  ///< the document as read, echoed into the record
};

namespace detail {

class FieldErrors {
public:
    void add(const std::string& field, const std::string& message) { errors_.push_back(field + ": " + message); }
    [[nodiscard]] bool empty() const { return errors_.empty(); }
    [[nodiscard]] const std::vector<std::string>& list() const { return errors_; }

    // Reads a required finite number; records an error and returns nullopt otherwise.
    std::optional<double> number(const Json& obj, const std::string& path, const char* key) {
        const std::string field = path + "." + key;
        if (!obj.is_object() || !obj.contains(key)) {
            add(field, "missing");
            return std::nullopt;
        }
        const auto& v = obj.at(key);
        if (!v.is_number() || !std::isfinite(v.get<double>())) {
            add(field, "must be a finite number");
            return std::nullopt;
        }
        return v.get<double>();
    }

    std::optional<std::int64_t> integer(const Json& obj, const std::string& path, const char* key) {
        const std::string field = path + "." + key;
        if (!obj.is_object() || !obj.contains(key)) {
            add(field, "missing");
            return std::nullopt;
        }
        const auto& v = obj.at(key);
        if (!v.is_number_integer()) {
            add(field, "must be an integer");
            return std::nullopt;
        }
        return v.get<std::int64_t>();
    }

    std::optional<std::string> type_tag(const Json& obj, const std::string& path) {
        if (!obj.is_object()) {
            add(path, "must be an object");
            return std::nullopt;
        }
        if (!obj.contains("type") || !obj.at("type").is_string()) {
            add(path + ".type", "missing or not a string");
            return std::nullopt;
        }
        return obj.at("type").get<std::string>();
    }

private:
    std::vector<std::string> errors_;
};

inline std::optional<Region> parse_region(const Json& j, const std::string& path, FieldErrors& err) {
    const auto type = err.type_tag(j, path);
    if (!type) return std::nullopt;
    if (*type == "point" || *type == "complement_of_point") {
        const auto v = err.number(j, path, "value");
        if (!v) return std::nullopt;
        if (*type == "point") return region::Point{*v};
        return region::ComplementOfPoint{*v};
    }
    if (*type == "interval" || *type == "complement_of_interval") {
        const auto lo = err.number(j, path, "lo");
        const auto hi = err.number(j, path, "hi");
        if (!lo || !hi) return std::nullopt;
        if (!(*lo < *hi)) {
            err.add(path, "requires lo < hi");
            return std::nullopt;
        }
        if (*type == "interval") return region::Interval{*lo, *hi};
        return region::ComplementOfInterval{*lo, *hi};
    }
    err.add(path + ".type", "unknown region type '" + *type + "'");
    return std::nullopt;
}

inline std::optional<WeightSpec> parse_weight(const Json& j, const std::string& path, FieldErrors& err) {
    const auto type = err.type_tag(j, path);
    if (!type) return std::nullopt;
    const auto before = err.list().size();
    std::optional<WeightSpec> out;
    if (*type == "point_mass") {
        if (auto t = err.number(j, path, "theta")) out = weight::PointMass{*t};
    } else if (*type == "two_point_mass") {
        auto c = err.number(j, path, "center");
        auto d = err.number(j, path, "delta");
        if (c && d) out = weight::TwoPointMass{*c, *d};
    } else if (*type == "uniform") {
        auto lo = err.number(j, path, "lo");
        auto hi = err.number(j, path, "hi");
        if (lo && hi) out = weight::Uniform{*lo, *hi};
    } else if (*type == "beta") {
        auto a = err.number(j, path, "a");
        auto b = err.number(j, path, "b");
        if (a && b) out = weight::Beta{*a, *b};
    } else if (*type == "normal") {
        auto m = err.number(j, path, "mean");
        auto v = err.number(j, path, "variance");
        if (m && v) out = weight::Normal{*m, *v};
    } else if (*type == "dirac_at_null") {
        out = weight::DiracAtNull{};
    } else if (*type == "improper_reference") {
        err.add(path + ".type", "improper_reference has no evidence; use a proper weight");
    } else {
        err.add(path + ".type", "unknown weight type '" + *type + "'");
    }
    if (out && err.list().size() == before) {
        try {
            validate(*out);
        } catch (const domain_error& e) {
            err.add(path, e.what());
            return std::nullopt;
        }
    }
    return out;
}

inline std::optional<ErrorWeights> parse_error_weights(const Json& j, FieldErrors& err) {
    const std::string path = "error_weights";
    if (!j.is_object()) {
        err.add(path, "must be an object");
        return std::nullopt;
    }
    auto guarded = [&](auto&& make) -> std::optional<ErrorWeights> {
        try {
            return make();
        } catch (const domain_error& e) {
            err.add(path, e.what());
            return std::nullopt;
        }
    };
    const int forms = int{j.contains("a") || j.contains("b")} + int{j.contains("ratio")} + int{j.contains("elicit")};
    if (forms != 1) {
        err.add(path, "give exactly one of {a, b}, {ratio} or {elicit}");
        return std::nullopt;
    }
    if (j.contains("ratio")) {
        const auto r = err.number(j, path, "ratio");
        if (!r) return std::nullopt;
        return guarded([&] { return ErrorWeights::from_ratio(*r); });
    }
    if (j.contains("elicit")) {
        const auto& e = j.at("elicit");
        const std::string ep = path + ".elicit";
        const auto p = err.number(e, ep, "prior_null");
        const auto l0 = err.number(e, ep, "loss_false_accept");
        const auto l1 = err.number(e, ep, "loss_false_reject");
        if (!p || !l0 || !l1) return std::nullopt;
        return guarded([&] { return ErrorWeights::from_ratio(elicit_ratio(*p, *l0, *l1)); });
    }
    const auto a = err.number(j, path, "a");
    const auto b = err.number(j, path, "b");
    if (!a || !b) return std::nullopt;
    return guarded([&] { return ErrorWeights(*a, *b); });
}

inline std::optional<Family> parse_family(const Json& doc, FieldErrors& err) {
    if (!doc.contains("family") || !doc.at("family").is_string()) {
        err.add("family", "missing or not a string");
        return std::nullopt;
    }
    const auto f = doc.at("family").get<std::string>();
    if (f == "normal") return Family::normal_known_variance;
    if (f == "binomial") return Family::binomial;
    if (f == "negative_binomial") return Family::negative_binomial;
    err.add("family", "unknown family '" + f + "'");
    return std::nullopt;
}

inline std::optional<DataSummary> parse_data(const Json& j, Family family, FieldErrors& err) {
    if (!j.is_object()) {
        err.add("data", "must be an object");
        return std::nullopt;
    }
    if (family == Family::normal_known_variance) {
        const auto mean = err.number(j, "data", "mean");
        const auto n = err.integer(j, "data", "n");
        const auto sigma = err.number(j, "data", "sigma");
        if (!mean || !n || !sigma) return std::nullopt;
        if (*n < 1) err.add("data.n", "must be >= 1");
        if (!(*sigma > 0.0)) err.add("data.sigma", "must be positive");
        return NormalSummary{*mean, *n, *sigma};
    }
    const auto s = err.integer(j, "data", "successes");
    const auto n = err.integer(j, "data", "trials");
    if (!s || !n) return std::nullopt;
    if (*s < 0 || *s > *n) err.add("data.successes", "requires 0 <= successes <= trials");
    if (family == Family::negative_binomial && *n - *s < 1)
        err.add("data.trials", "negative binomial sampling needs at least one tail (trials > successes)");
    return CountSummary{*s, *n};
}

}  // namespace detail

/// Validates a scenario document, reporting every offending field at once.
[[nodiscard]] inline Scenario parse_scenario(const Json& doc) {
    detail::FieldErrors err;
    Scenario sc;
    sc.source = doc;
    if (!doc.is_object()) throw validation_error({"(root): must be a JSON object"});

    if (!doc.contains("schema_version") || !doc.at("schema_version").is_number_integer())
        err.add("schema_version", "missing or not an integer");
    else if (doc.at("schema_version").get<int>() != kScenarioSchemaVersion)
        err.add("schema_version", "unsupported version " + doc.at("schema_version").dump() + " (expected " +
                                      std::to_string(kScenarioSchemaVersion) + ")");

    if (doc.contains("name")) {
        if (doc.at("name").is_string()) sc.name = doc.at("name").get<std::string>();
        else err.add("name", "must be a string");
    }

    const auto family = detail::parse_family(doc, err);

    std::optional<Region> r0, r1;
    if (!doc.contains("hypotheses") || !doc.at("hypotheses").is_object()) {
        err.add("hypotheses", "missing or not an object");
    } else {
        const auto& h = doc.at("hypotheses");
        r0 = detail::parse_region(h.value("null", Json()), "hypotheses.null", err);
        r1 = detail::parse_region(h.value("alternative", Json()), "hypotheses.alternative", err);
    }

    std::optional<WeightSpec> w0, w1;
    if (!doc.contains("weights") || !doc.at("weights").is_object()) {
        err.add("weights", "missing or not an object");
    } else {
        const auto& w = doc.at("weights");
        w0 = detail::parse_weight(w.value("null", Json()), "weights.null", err);
        w1 = detail::parse_weight(w.value("alternative", Json()), "weights.alternative", err);
    }

    std::optional<DataSummary> data;
    if (!doc.contains("data")) err.add("data", "missing");
    else if (family) data = detail::parse_data(doc.at("data"), *family, err);

    std::optional<ErrorWeights> ew;
    if (!doc.contains("error_weights")) err.add("error_weights", "missing");
    else ew = detail::parse_error_weights(doc.at("error_weights"), err);

    if (family && r0 && r1) {
        sc.hypotheses = HypothesisPair{*family, *r0, *r1};
        try {
            validate(sc.hypotheses);
        } catch (const domain_error& e) {
            err.add("hypotheses", e.what());
        }
        const auto* null_point = std::get_if<region::Point>(&*r0);
        for (const auto& [w, path] : {std::pair{&w0, "weights.null"}, std::pair{&w1, "weights.alternative"}}) {
            if (!*w || !std::holds_alternative<weight::DiracAtNull>(**w)) continue;
            if (null_point) **w = weight::PointMass{null_point->value};
            else err.add(path, "dirac_at_null needs a point null hypothesis");
        }
        if (w0 && std::holds_alternative<weight::PointMass>(*w0) &&
            !contains(*r0, std::get<weight::PointMass>(*w0).theta))
            err.add("weights.null", "point mass lies outside the null region");
        if (w1 && std::holds_alternative<weight::PointMass>(*w1) &&
            !contains(*r1, std::get<weight::PointMass>(*w1).theta))
            err.add("weights.alternative", "point mass lies outside the alternative region");
    }

    if (!err.empty()) throw validation_error(err.list());
    sc.weight0 = *w0;
    sc.weight1 = *w1;
    sc.data = *data;
    sc.error_weights = *ew;
    return sc;
}

[[nodiscard]] inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw validation_error({std::string("(file): not valid JSON: ") + e.what()});
    }
    return parse_scenario(doc);
}

struct PValues {
    std::optional<double> upper_tail;            ///< Pr(S >= s) under the null point
    std::optional<double> two_sided;             ///< continuity-corrected normal (binomial) or exact (normal)
    std::optional<double> two_sided_exact;       ///< doubled exact binomial tail
};

struct TestOutcome {
    LogEvidence evidence0;
    LogEvidence evidence1;
    double log_ratio_01 = 0.0;
    Decision decision;
    PValues p_values;
};

[[nodiscard]] inline CountLikelihood count_likelihood(Family f) {
    return f == Family::negative_binomial ? CountLikelihood::negative_binomial : CountLikelihood::binomial;
}

[[nodiscard]] inline TestOutcome run_scenario(const Scenario& sc) {
    TestOutcome out;
    const auto family = sc.hypotheses.family;
    const auto* null_point = std::get_if<region::Point>(&sc.hypotheses.null_region);
    if (family == Family::normal_known_variance) {
        const auto& d = std::get<NormalSummary>(sc.data);
        out.evidence0 = log_evidence_normal(d, sc.weight0, Hypothesis::null);
        out.evidence1 = log_evidence_normal(d, sc.weight1, Hypothesis::alternative);
        if (null_point) out.p_values.two_sided = pvalue_two_sided_normal(d, null_point->value);
    } else {
        const auto& d = std::get<CountSummary>(sc.data);
        const auto kind = count_likelihood(family);
        out.evidence0 = log_evidence_binomial(d, sc.weight0, Hypothesis::null, kind);
        out.evidence1 = log_evidence_binomial(d, sc.weight1, Hypothesis::alternative, kind);
        if (null_point && null_point->value > 0.0 && null_point->value < 1.0) {
            if (family == Family::binomial) {
                out.p_values.upper_tail = pvalue_binomial_tail(d.successes, d.trials, null_point->value);
                if (null_point->value == 0.5 && d.trials > 0) {
                    out.p_values.two_sided = pvalue_two_sided_binomial(d.successes, d.trials);
                    out.p_values.two_sided_exact = pvalue_two_sided_binomial_exact(d.successes, d.trials);
                }
            } else {
                out.p_values.upper_tail = pvalue_negative_binomial_tail(d.successes, d.tails(), null_point->value);
            }
        }
    }
    out.log_ratio_01 = log_evidence_ratio(out.evidence0, out.evidence1);
    if (!std::isfinite(out.log_ratio_01))
        throw domain_error("evidence ratio is not finite: the data have zero likelihood under one hypothesis");
    out.decision = decide(out.log_ratio_01, sc.error_weights);
    return out;
}

[[nodiscard]] inline Json to_json(const LogEvidence& e) {
    return Json{{"log_kernel", e.log_kernel}, {"log_constant", e.log_constant}, {"log_value", e.log_value()}};
}

[[nodiscard]] inline Json to_json(const JeffreysGrade& g) {
    return Json{{"grade", g.grade},
                {"contiguous_grade", g.contiguous_grade()},
                {"direction", to_string(g.direction)},
                {"label", g.label},
                {"mirrored_extension", g.mirrored}};
}

/// The record of one run. Timing is the last field and the only one that
/// varies between identical runs.
[[nodiscard]] inline Json result_record(const Scenario& sc, const TestOutcome& t, double timing_ms) {
    Json p = Json::object();
    if (t.p_values.upper_tail) p["upper_tail"] = *t.p_values.upper_tail;
    if (t.p_values.two_sided) p["two_sided"] = *t.p_values.two_sided;
    if (t.p_values.two_sided_exact) p["two_sided_exact"] = *t.p_values.two_sided_exact;
    return Json{{"record", "test_result"},
                {"scenario", sc.source},
                {"error_weights", {{"a", sc.error_weights.a()}, {"b", sc.error_weights.b()}, {"r", sc.error_weights.ratio()}}},
                {"log_evidence", {{"null", to_json(t.evidence0)}, {"alternative", to_json(t.evidence1)}}},
                {"log_ratio_01", t.log_ratio_01},
                {"ratio_01", std::exp(t.log_ratio_01)},
                {"decision", to_string(t.decision.verdict)},
                {"grade", to_json(t.decision.grade)},
                {"p_values", p},
                {"timing_ms", timing_ms}};
}

/// Parses, runs and records a scenario, measuring the pipeline time.
[[nodiscard]] inline Json run_scenario_record(const Scenario& sc) {
    const auto start = std::chrono::steady_clock::now();
    const auto outcome = run_scenario(sc);
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return result_record(sc, outcome, ms);
}

}  // namespace errsum
