#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "errsum/report.hpp"

using namespace errsum;

namespace {

Report sample_report() {
    Report r{"demo", "Demo report", {}, {}, {"a note"}};
    r.tables.push_back({"t", {"name", "value", "flag"}, {{"x, y", 0.125, true}, {"plain", std::nan(""), false}}});
    r.checks.push_back(absolute_check("q1", 1.0, 1.05, 0.1));
    r.checks.push_back(relative_check("q2", 2.0, 2.5, 0.1));
    return r;
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST(Checks, Builders) {
    EXPECT_TRUE(absolute_check("a", 1.0, 1.0 + 1e-9, 1e-8).pass);
    EXPECT_FALSE(absolute_check("a", 1.0, 1.1, 1e-8).pass);
    const auto rel = relative_check("r", 4.0, 5.0, 0.3);
    EXPECT_TRUE(rel.pass);
    EXPECT_DOUBLE_EQ(rel.difference, 0.25);
    EXPECT_TRUE(log10_check("l", 1e-7, 1.2e-7, 0.1).pass);
    EXPECT_FALSE(log10_check("l", 1e-7, 1e-6, 0.1).pass);
    EXPECT_TRUE(text_check("t", "RejectH0", "RejectH0").pass);
    EXPECT_FALSE(text_check("t", "RejectH0", "AcceptH0").pass);
    EXPECT_FALSE(bool_check("b", false).pass);
    EXPECT_EQ(relative_difference(0.5, 0.0), 0.5);
}

TEST(Checks, ReportPassesOnlyIfAllPass) {
    auto r = sample_report();
    EXPECT_FALSE(r.passed());
    r.checks.pop_back();
    EXPECT_TRUE(r.passed());
}

TEST(Render, CsvEscaping) {
    EXPECT_EQ(csv_escape("plain"), "plain");
    EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(Render, Csv) {
    std::ostringstream os;
    render(os, sample_report(), OutputFormat::csv);
    const auto l = lines_of(os.str());
    ASSERT_GE(l.size(), 7U);
    EXPECT_EQ(l[0], "name,value,flag");
    EXPECT_EQ(l[1], "\"x, y\",0.125,true");
    EXPECT_EQ(l[2], "plain,,false");
    EXPECT_EQ(l[3], "");
    EXPECT_EQ(l[4], "quantity,expected,computed,difference,tolerance,status");
    EXPECT_NE(l[6].find("FAIL"), std::string::npos);
}

TEST(Render, Records) {
    std::ostringstream os;
    render(os, sample_report(), OutputFormat::records);
    const auto l = lines_of(os.str());
    ASSERT_EQ(l.size(), 5U);
    const auto row = Json::parse(l[0]);
    EXPECT_EQ(row["record"], "row");
    EXPECT_EQ(row["name"], "x, y");
    EXPECT_TRUE(Json::parse(l[1])["value"].is_null());
    const auto check = Json::parse(l[3]);
    EXPECT_EQ(check["record"], "check");
    EXPECT_EQ(check["pass"], false);
    const auto summary = Json::parse(l[4]);
    EXPECT_EQ(summary["record"], "summary");
    EXPECT_EQ(summary["passed"], false);
    EXPECT_EQ(summary["notes"][0], "a note");
}

TEST(Render, Human) {
    std::ostringstream os;
    render(os, sample_report(), OutputFormat::human);
    const auto s = os.str();
    EXPECT_EQ(s.rfind("Demo report\n", 0), 0U);
    EXPECT_NE(s.find("[t]"), std::string::npos);
    EXPECT_NE(s.find("0.125"), std::string::npos);
    EXPECT_NE(s.find("note: a note"), std::string::npos);
    EXPECT_NE(s.find("demo: CHECKS FAILED"), std::string::npos);
}

TEST(Render, CellFormatting) {
    EXPECT_EQ(format_cell(Json(3)), "3");
    EXPECT_EQ(format_cell(Json(1.0 / 3.0)), "0.333333");
    EXPECT_EQ(format_cell(Json(std::nan(""))), "");
    EXPECT_EQ(format_cell(Json()), "");
    EXPECT_EQ(display_width("\xce\xb1 = 1"), 5U);
}
