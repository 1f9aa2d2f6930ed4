#pragma once

// Tables and pass/fail checks shared by the reproduce, design and verify
// commands, with human, CSV and JSON Lines renderings.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace errsum {

using Json = nlohmann::ordered_json;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Json>> rows;
};

struct Check {
    std::string quantity;
    Json expected;
    Json computed;
    double difference = std::nan("");  ///< in the unit named by `tolerance`
    std::string tolerance;
    bool pass = false;
};

struct Report {
    std::string target;
    std::string title;
    std::vector<Table> tables;
    std::vector<Check> checks;
    std::vector<std::string> notes;

    [[nodiscard]] bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
};

[[nodiscard]] inline double relative_difference(double computed, double expected) {
    return expected == 0.0 ? computed : (computed - expected) / std::abs(expected);
}

[[nodiscard]] inline Check absolute_check(std::string quantity, double expected, double computed, double tol) {
    const double d = computed - expected;
    return {std::move(quantity), expected, computed, d, "abs <= " + Json(tol).dump(), std::abs(d) <= tol};
}

[[nodiscard]] inline Check relative_check(std::string quantity, double expected, double computed, double tol) {
    const double d = relative_difference(computed, expected);
    return {std::move(quantity), expected, computed, d, "rel <= " + Json(tol).dump(), std::abs(d) <= tol};
}

[[nodiscard]] inline Check log10_check(std::string quantity, double expected, double computed, double tol) {
    const double d = std::log10(computed) - std::log10(expected);
    return {std::move(quantity), expected, computed, d, "|dlog10| <= " + Json(tol).dump(), std::abs(d) <= tol};
}

[[nodiscard]] inline Check text_check(std::string quantity, const std::string& expected, const std::string& computed) {
    return {std::move(quantity), expected, computed, std::nan(""), "equal", expected == computed};
}

[[nodiscard]] inline Check bool_check(std::string quantity, bool ok, Json detail = "holds") {
    return {std::move(quantity), "holds", ok ? detail : Json("violated"), std::nan(""), "must hold", ok};
}

// ---------------------------------------------------------------------------
// Rendering

[[nodiscard]] inline std::string format_cell(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return v.dump();
    if (v.is_number_float()) {
        const double x = v.get<double>();
        if (std::isnan(x)) return "";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", x);
        return buf;
    }
    if (v.is_null()) return "";
    return v.dump();
}

[[nodiscard]] inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

[[nodiscard]] inline Table checks_table(const Report& r) {
    Table t{"checks", {"quantity", "expected", "computed", "difference", "tolerance", "status"}, {}};
    for (const auto& c : r.checks)
        t.rows.push_back({c.quantity, c.expected, c.computed, c.difference, c.tolerance, c.pass ? "PASS" : "FAIL"});
    return t;
}

// Display width of UTF-8 text, counting code points.
[[nodiscard]] inline std::size_t display_width(const std::string& s) {
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

inline void render_table_human(std::ostream& os, const Table& t) {
    std::vector<std::size_t> width(t.columns.size());
    for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = display_width(t.columns[i]);
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : t.rows) {
        auto& out = cells.emplace_back();
        for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) {
            out.push_back(format_cell(row[i]));
            width[i] = std::max(width[i], display_width(out.back()));
        }
    }
    auto line = [&](const std::vector<std::string>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            os << "  " << v[i];
            if (i + 1 < v.size()) os << std::string(width[i] - display_width(v[i]), ' ');
        }
        os << '\n';
    };
    os << "[" << t.name << "]\n";
    line(t.columns);
    for (const auto& c : cells) line(c);
}

inline void render_human(std::ostream& os, const Report& r) {
    os << r.title << "\n\n";
    for (const auto& t : r.tables) {
        render_table_human(os, t);
        os << '\n';
    }
    if (!r.checks.empty()) {
        render_table_human(os, checks_table(r));
        os << '\n';
    }
    for (const auto& n : r.notes) os << "note: " << n << '\n';
    os << r.target << ": " << (r.passed() ? "all checks passed" : "CHECKS FAILED") << '\n';
}

inline void render_table_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_escape(t.columns[i]);
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::string cell;
            if (row[i].is_number_float()) cell = std::isnan(row[i].get<double>()) ? "" : Json(row[i]).dump();
            else cell = format_cell(row[i]);
            os << (i ? "," : "") << csv_escape(cell);
        }
        os << '\n';
    }
}

/// Tables in order, then the checks, separated by blank lines.
inline void render_csv(std::ostream& os, const Report& r) {
    for (const auto& t : r.tables) {
        render_table_csv(os, t);
        os << '\n';
    }
    if (!r.checks.empty()) render_table_csv(os, checks_table(r));
}

/// One JSON object per line: each table row, each check, then a summary.
inline void render_records(std::ostream& os, const Report& r) {
    for (const auto& t : r.tables) {
        for (const auto& row : t.rows) {
            Json rec{{"record", "row"}, {"target", r.target}, {"table", t.name}};
            for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
                const auto& v = row[i];
                rec[t.columns[i]] = (v.is_number_float() && std::isnan(v.get<double>())) ? Json() : v;
            }
            os << rec.dump() << '\n';
        }
    }
    for (const auto& c : r.checks) {
        os << Json{{"record", "check"},
                   {"target", r.target},
                   {"quantity", c.quantity},
                   {"expected", c.expected},
                   {"computed", c.computed},
                   {"difference", std::isnan(c.difference) ? Json() : Json(c.difference)},
                   {"tolerance", c.tolerance},
                   {"pass", c.pass}}
                  .dump()
           << '\n';
    }
    Json summary{{"record", "summary"}, {"target", r.target}, {"passed", r.passed()}, {"notes", r.notes}};
    os << summary.dump() << '\n';
}

enum class OutputFormat { human, csv, records };

inline void render(std::ostream& os, const Report& r, OutputFormat f) {
    switch (f) {
        case OutputFormat::human: render_human(os, r); break;
        case OutputFormat::csv: render_csv(os, r); break;
        case OutputFormat::records: render_records(os, r); break;
    }
}

}  // namespace errsum
