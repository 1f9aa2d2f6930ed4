// errsum: reproduce worked examples, run scenario files, design simple
// normal tests and run the verification suites.
//
// Exit status: 0 success, 1 a check failed, 2 usage error, 3 invalid
// scenario, 4 precondition failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "errsum/errsum.hpp"

namespace {

using namespace errsum;

struct OutputOptions {
    std::string format = "human";
    std::string out;
};

void add_output_options(CLI::App* cmd, OutputOptions& o) {
    cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"human", "csv", "records"}))
        ->capture_default_str();
    cmd->add_option("--out", o.out, "Write the output to this file instead of stdout");
}

OutputFormat parse_format(const std::string& f) {
    if (f == "csv") return OutputFormat::csv;
    if (f == "records") return OutputFormat::records;
    return OutputFormat::human;
}

void emit(const std::string& text, const OutputOptions& o) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot write '" + o.out + "'");
    f << text;
}

int emit_report(const Report& r, const OutputOptions& o) {
    std::ostringstream ss;
    render(ss, r, parse_format(o.format));
    emit(ss.str(), o);
    if (!o.out.empty()) std::cout << r.target << ": " << (r.passed() ? "all checks passed" : "CHECKS FAILED") << '\n';
    if (!r.passed()) {
        for (const auto& c : r.checks)
            if (!c.pass)
                std::cerr << "FAILED " << r.target << ": " << c.quantity << " (expected " << format_cell(c.expected)
                          << ", computed " << format_cell(c.computed) << ", tolerance " << c.tolerance << ")\n";
    }
    return r.passed() ? 0 : 1;
}

Report test_report(const Json& record) {
    Report r{"test", "Scenario " + record["scenario"].value("name", std::string("(unnamed)")), {}, {}, {}};
    Table t{"result", {"quantity", "value"}, {}};
    t.rows.push_back({"log evidence (null)", record["log_evidence"]["null"]["log_value"]});
    t.rows.push_back({"log evidence (alternative)", record["log_evidence"]["alternative"]["log_value"]});
    t.rows.push_back({"log ratio of evidences", record["log_ratio_01"]});
    t.rows.push_back({"ratio of evidences", record["ratio_01"]});
    t.rows.push_back({"r = b/a", record["error_weights"]["r"]});
    t.rows.push_back({"decision", record["decision"]});
    t.rows.push_back({"grade", record["grade"]["grade"]});
    t.rows.push_back({"grade label", record["grade"]["label"]});
    for (const auto& [k, v] : record["p_values"].items()) t.rows.push_back({"p-value (" + k + ")", v});
    r.tables.push_back(std::move(t));
    if (record["grade"]["mirrored_extension"].get<bool>())
        r.notes.push_back("evidence for H0 is graded by mirroring the table onto 1/ratio");
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hypothesis tests that minimize a weighted sum of Type I and Type II errors"};
    app.require_subcommand(1);

    // reproduce
    OutputOptions rep_out;
    std::string target;
    auto* rep = app.add_subcommand("reproduce", "Reproduce a worked example with published values alongside");
    rep->add_option("target", target, "Example to reproduce")->required()->check(CLI::IsMember(reproduce_targets()));
    add_output_options(rep, rep_out);

    // test
    OutputOptions test_out;
    std::string scenario_path;
    std::optional<double> a, b, ratio;
    auto* test = app.add_subcommand("test", "Run the optimal test described by a scenario file");
    test->add_option("scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    auto* oa = test->add_option("--a", a, "Weight on the Type I error");
    auto* ob = test->add_option("--b", b, "Weight on the Type II error");
    auto* orr = test->add_option("--ratio", ratio, "r = b/a");
    oa->needs(ob);
    ob->needs(oa);
    orr->excludes(oa)->excludes(ob);
    add_output_options(test, test_out);

    // design
    OutputOptions design_out;
    DesignSpec spec;
    auto* design = app.add_subcommand("design", "Fixed-alpha design for two simple normal hypotheses");
    design->add_option("--theta0", spec.theta0, "Null mean")->capture_default_str();
    design->add_option("--theta1", spec.theta1, "Alternative mean")->capture_default_str();
    design->add_option("--sigma", spec.sigma, "Known standard deviation")->capture_default_str();
    design->add_option("--alpha", spec.alpha, "Type I error target")->capture_default_str();
    design->add_option("--beta", spec.beta, "Type II error target")->capture_default_str();
    add_output_options(design, design_out);

    // verify
    OutputOptions verify_out;
    std::string suite;
    SuiteOptions suite_opt;
    auto* ver = app.add_subcommand("verify", "Run a verification suite");
    ver->add_option("suite", suite, "Suite to run")
        ->required()
        ->check(CLI::IsMember({"lemma1", "lemma2", "consistency", "matching"}));
    ver->add_option("--seed", suite_opt.seed, "Random seed")->capture_default_str();
    ver->add_option("--trials", suite_opt.trials, "Monte Carlo trials per hypothesis")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_output_options(ver, verify_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*rep) return emit_report(reproduce(target), rep_out);
        if (*design) return emit_report(design_report(spec), design_out);
        if (*ver) return emit_report(verify(suite, suite_opt), verify_out);
        if (*test) {
            auto sc = load_scenario(scenario_path);
            if (a && b) sc.error_weights = ErrorWeights(*a, *b);
            if (ratio) sc.error_weights = ErrorWeights::from_ratio(*ratio);
            const auto record = run_scenario_record(sc);
            if (test_out.format == "records") {
                emit(record.dump() + "\n", test_out);
                return 0;
            }
            std::ostringstream ss;
            render(ss, test_report(record), parse_format(test_out.format));
            emit(ss.str(), test_out);
            return 0;
        }
    } catch (const validation_error& e) {
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const errsum::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
