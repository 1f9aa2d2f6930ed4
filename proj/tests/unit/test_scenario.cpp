#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "errsum/scenario.hpp"

using namespace errsum;

namespace {

const std::string kDir = ERRSUM_SCENARIO_DIR;

Json coin_doc() {
    return Json::parse(R"({
      "schema_version": 1, "name": "coin", "family": "binomial",
      "hypotheses": {"null": {"type": "point", "value": 0.5},
                     "alternative": {"type": "interval", "lo": 0.5, "hi": 1.0}},
      "weights": {"null": {"type": "dirac_at_null"}, "alternative": {"type": "uniform", "lo": 0.5, "hi": 1.0}},
      "data": {"successes": 9, "trials": 12},
      "error_weights": {"a": 1, "b": 1}})");
}

std::vector<std::string> errors_of(const Json& doc) {
    try {
        (void)parse_scenario(doc);
    } catch (const validation_error& e) {
        return e.fields();
    }
    return {};
}

bool mentions(const std::vector<std::string>& errs, const std::string& field) {
    for (const auto& e : errs)
        if (e.rfind(field + ":", 0) == 0) return true;
    return false;
}

Json without_timing(Json j) {
    j.erase("timing_ms");
    return j;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(ERRSUM_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Parse, ValidDocument) {
    const auto sc = parse_scenario(coin_doc());
    EXPECT_EQ(sc.name, "coin");
    EXPECT_EQ(sc.hypotheses.family, Family::binomial);
    ASSERT_TRUE(std::holds_alternative<weight::PointMass>(sc.weight0));
    EXPECT_EQ(std::get<weight::PointMass>(sc.weight0).theta, 0.5);
    EXPECT_EQ(sc.error_weights.ratio(), 1.0);
}

TEST(Parse, ReportsEveryOffendingField) {
    Json doc = coin_doc();
    doc["schema_version"] = 2;
    doc["data"]["successes"] = 13;
    doc["weights"]["alternative"] = Json{{"type", "uniform"}, {"lo", 0.5}};
    doc["error_weights"] = Json{{"a", 1}, {"ratio", 2}};
    const auto errs = errors_of(doc);
    EXPECT_TRUE(mentions(errs, "schema_version"));
    EXPECT_TRUE(mentions(errs, "data.successes"));
    EXPECT_TRUE(mentions(errs, "weights.alternative.hi"));
    EXPECT_TRUE(mentions(errs, "error_weights"));
    EXPECT_EQ(errs.size(), 4U);
}

TEST(Parse, StructuralErrors) {
    EXPECT_THROW((void)parse_scenario(Json::array()), validation_error);
    Json doc = coin_doc();
    doc.erase("hypotheses");
    doc["family"] = "poisson";
    const auto errs = errors_of(doc);
    EXPECT_TRUE(mentions(errs, "hypotheses"));
    EXPECT_TRUE(mentions(errs, "family"));
}

TEST(Parse, WeightsMustSitInTheirRegions) {
    Json doc = coin_doc();
    doc["weights"]["alternative"] = Json{{"type", "point_mass"}, {"theta", 0.2}};
    EXPECT_TRUE(mentions(errors_of(doc), "weights.alternative"));
    doc = coin_doc();
    doc["hypotheses"]["null"] = Json{{"type", "interval"}, {"lo", 0.0}, {"hi", 0.5}};
    EXPECT_TRUE(mentions(errors_of(doc), "weights.null"));
    doc = coin_doc();
    doc["weights"]["null"] = Json{{"type", "improper_reference"}};
    EXPECT_TRUE(mentions(errors_of(doc), "weights.null.type"));
}

TEST(Parse, NegativeBinomialNeedsATail) {
    Json doc = coin_doc();
    doc["family"] = "negative_binomial";
    doc["data"] = Json{{"successes", 5}, {"trials", 5}};
    EXPECT_TRUE(mentions(errors_of(doc), "data.trials"));
}

TEST(Files, UniformUpperAlternative) {
    const auto sc = load_scenario(kDir + "/coin_uniform_upper.json");
    const auto out = run_scenario(sc);
    EXPECT_NEAR(std::exp(out.log_ratio_01), 0.366, 0.002);
    EXPECT_EQ(out.decision.verdict, Verdict::reject_h0);
    EXPECT_EQ(out.decision.grade.grade, 1);
    ASSERT_TRUE(out.p_values.upper_tail);
    EXPECT_DOUBLE_EQ(*out.p_values.upper_tail, 299.0 / 4096.0);
}

TEST(Files, StoppingRuleLeavesRatioUnchanged) {
    const auto bin = run_scenario(load_scenario(kDir + "/coin_uniform_upper.json"));
    const auto nb = run_scenario(load_scenario(kDir + "/coin_negative_binomial.json"));
    EXPECT_EQ(bin.log_ratio_01, nb.log_ratio_01);
    EXPECT_EQ(bin.decision.verdict, nb.decision.verdict);
    ASSERT_TRUE(nb.p_values.upper_tail);
    EXPECT_NEAR(*nb.p_values.upper_tail, 0.0327, 0.0001);
    EXPECT_NE(bin.evidence0.log_constant, nb.evidence0.log_constant);
}

TEST(Files, HalfwayMeanIsIndifferent) {
    const auto out = run_scenario(load_scenario(kDir + "/normal_indifferent.json"));
    EXPECT_NEAR(out.log_ratio_01, 0.0, 1e-12);
    EXPECT_EQ(out.decision.verdict, Verdict::indifferent);
}

TEST(Files, ElicitedRatioSetsTheThreshold) {
    auto sc = load_scenario(kDir + "/normal_elicited.json");
    EXPECT_DOUBLE_EQ(sc.error_weights.ratio(), 0.63);
    // ln ratio = -2 n mean / sigma^2 for means -1 and 1.
    for (double mean : {-0.5, 0.0, 0.09, 0.1, 0.11, 0.2, 1.0}) {
        sc.data = NormalSummary{mean, 20, 3.0};
        const auto out = run_scenario(sc);
        EXPECT_NEAR(out.log_ratio_01, -2.0 * 20.0 * mean / 9.0, 1e-12);
        EXPECT_EQ(out.decision.verdict == Verdict::reject_h0, out.log_ratio_01 < std::log(0.63)) << mean;
    }
}

TEST(Files, IntrinsicWeightMatchesClosedForm) {
    const auto sc = load_scenario(kDir + "/normal_intrinsic.json");
    const auto out = run_scenario(sc);
    const auto& d = std::get<NormalSummary>(sc.data);
    const double z2 = d.mean * d.mean * 40.0 / 9.0;
    EXPECT_NEAR(out.log_ratio_01, 0.5 * std::log(81.0) - z2 * 40.0 / 81.0, 1e-10);
    EXPECT_EQ(out.decision.verdict, Verdict::reject_h0);
}

TEST(Files, MissingFileAndBadJson) {
    EXPECT_THROW((void)load_scenario(kDir + "/does_not_exist.json"), std::runtime_error);
    const auto tmp = std::filesystem::temp_directory_path() / "errsum_bad.json";
    std::ofstream(tmp) << "{ not json";
    EXPECT_THROW((void)load_scenario(tmp.string()), validation_error);
    std::filesystem::remove(tmp);
}

TEST(Record, DeterministicApartFromTiming) {
    const auto sc = load_scenario(kDir + "/coin_uniform_upper.json");
    const auto a = run_scenario_record(sc);
    const auto b = run_scenario_record(sc);
    EXPECT_EQ(without_timing(a).dump(), without_timing(b).dump());
    EXPECT_EQ(a.back().type(), Json::value_t::number_float);
    EXPECT_EQ(std::prev(a.end()).key(), "timing_ms");
    EXPECT_EQ(a["decision"], "RejectH0");
    EXPECT_EQ(a["scenario"], sc.source);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli("test " + kDir + "/coin_uniform_upper.json"), 0);
    EXPECT_EQ(run_cli("test " + kDir + "/coin_uniform_upper.json --format records"), 0);
    EXPECT_EQ(run_cli("test " + kDir + "/coin_uniform_upper.json --ratio 0.1"), 0);
    EXPECT_EQ(run_cli("test " + kDir + "/coin_uniform_upper.json --ratio -1"), 4);
    EXPECT_EQ(run_cli("nonsense"), 2);
    EXPECT_EQ(run_cli("design --alpha 0.7 --beta 0.6"), 4);
    EXPECT_EQ(run_cli("reproduce lindley-phillips"), 0);

    const auto tmp = std::filesystem::temp_directory_path() / "errsum_invalid.json";
    std::ofstream(tmp) << R"({"schema_version": 1})";
    EXPECT_EQ(run_cli("test " + tmp.string()), 3);
    std::filesystem::remove(tmp);
}
