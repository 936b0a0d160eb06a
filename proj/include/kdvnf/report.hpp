#pragma once
// Result emission: CSV tables with fixed column order and JSON documents,
// both using the 17-digit float format.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kdvnf/errors.hpp"
#include "kdvnf/format.hpp"
#include "kdvnf/scalar.hpp"
#include "kdvnf/verify.hpp"

namespace kdvnf {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) {
        if (row.size() != header.size()) throw Error("CSV row width does not match the header");
        rows.push_back(std::move(row));
    }
};

inline std::string cell(double x) { return fmt17(x); }
inline std::string cell(int x) { return std::to_string(x); }
inline std::string cell(long x) { return std::to_string(x); }
inline std::string cell(std::size_t x) { return std::to_string(x); }
inline std::string cell(const Rational& r) { return to_string(r); }
inline std::string cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

inline std::string to_csv_text(const CsvTable& t) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
    os << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << "\n";
    }
    return os.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os << content;
    os.flush();
    if (!os) throw Error("write failed: " + path.string());
}

inline void write_csv(const std::filesystem::path& path, const CsvTable& t) { write_text_file(path, to_csv_text(t)); }
inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    write_text_file(path, to_json_text(j));
}

enum class ReportFormat { csv, json };

// Writes <dir>/<name>.csv and/or <dir>/<name>.json.
inline void emit_report(const std::filesystem::path& dir, const std::string& name, const nlohmann::json& summary,
                        const CsvTable& table, std::initializer_list<ReportFormat> formats = {ReportFormat::csv,
                                                                                                ReportFormat::json}) {
    for (ReportFormat f : formats) {
        if (f == ReportFormat::csv) write_csv(dir / (name + ".csv"), table);
        if (f == ReportFormat::json) write_json(dir / (name + ".json"), summary);
    }
}

inline nlohmann::json rationals_json(const std::vector<Rational>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& r : v) a.push_back(to_string(r));
    return a;
}

// Certificate document for one verification campaign.
inline nlohmann::json certificate_json(const VerificationReport& r) {
    nlohmann::json j;
    j["identity"] = r.identity_name;
    j["j"] = r.j_max;
    j["trials"] = r.trials;
    j["cstar"] = r.cstars;
    j["seed"] = r.seed;
    j["status"] = r.pass ? "pass" : "fail";
    j["tree_count"] = r.tree_count;
    j["assignment_count"] = r.assignment_count;
    if (r.first_counterexample) {
        const auto& c = *r.first_counterexample;
        j["counterexample"] = {{"tree", nlohmann::json::parse(c.tree.to_json())},
                               {"leaf_values", rationals_json(c.leaf_values)},
                               {"cstar", c.cstar},
                               {"detail", c.detail}};
    }
    return j;
}

}  // namespace kdvnf
