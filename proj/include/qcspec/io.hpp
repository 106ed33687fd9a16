#pragma once

// CSV tables and JSON manifests.  Every artifact starts with a comment line
//   # qcspec schema_version=1 kind=<kind>
// followed by a header row.  Numbers are written in shortest round-trip form
// so reruns are byte-identical.

#include <string>
#include <vector>

#include "json.hpp"

#include "qcspec/interval_set.hpp"

namespace qcs {

inline constexpr int kSchemaVersion = 1;

std::string format_number(double x);
std::string format_number(Index x);

struct Table {
    std::string kind;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    Table() = default;
    Table(std::string kind, std::vector<std::string> columns) : kind(std::move(kind)), columns(std::move(columns)) {}

    /// Appends a row; cells are doubles, integers or strings.
    template <class... Cells>
    void add(const Cells&... cells) {
        std::vector<std::string> r;
        (r.push_back(cell(cells)), ...);
        if (r.size() != columns.size()) throw InvalidArgument("row width does not match the header");
        rows.push_back(std::move(r));
    }
    std::size_t column(const std::string& name) const;
    double number(std::size_t row, std::size_t col) const;

private:
    static std::string cell(double x) { return format_number(x); }
    static std::string cell(int x) { return format_number(static_cast<Index>(x)); }
    static std::string cell(Index x) { return format_number(x); }
    static std::string cell(std::size_t x) { return format_number(static_cast<Index>(x)); }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
};

class ArtifactError : public Error {
public:
    using Error::Error;
};

std::string to_csv(const Table& t);
Table parse_csv(const std::string& text, const std::string& source = "<input>");
void write_table(const Table& t, const std::string& path);
Table read_table(const std::string& path);

/// Kind "intervals": columns left, right.
Table interval_table(const IntervalSet& s);
IntervalSet intervals_from(const Table& t);

/// Writes pretty JSON with a trailing newline.
void write_json(const nlohmann::json& j, const std::string& path);

struct Manifest {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    nlohmann::json results = nlohmann::json::object();
    std::vector<std::pair<std::string, std::string>> artifacts;  // file, kind

    nlohmann::json to_json() const;
};

/// Diff of two artifacts of the same kind.  Interval artifacts are compared
/// by the measure of the symmetric difference; other tables cell by cell.
struct CompareReport {
    std::string kind;
    double tolerance = 0;
    double symmetric_difference = 0;   // intervals only
    double max_abs_delta = 0;
    std::vector<std::string> differences;

    bool identical() const { return differences.empty(); }
    nlohmann::json to_json() const;
};

CompareReport compare_tables(const Table& a, const Table& b, double tolerance);

}  // namespace qcs
