#include "qcspec/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Core>

namespace qcs {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0) return "0";  // no "-0"
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string format_number(Index x) { return std::to_string(x); }

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw ArtifactError("table '" + kind + "' has no column '" + name + "'");
}

namespace {

bool parse_double(const std::string& s, double& out) {
    if (s == "nan") { out = std::nan(""); return true; }
    if (s == "inf") { out = INFINITY; return true; }
    if (s == "-inf") { out = -INFINITY; return true; }
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') { out.push_back(cur); cur.clear(); }
        else cur += c;
    }
    out.push_back(cur);
    return out;
}

}  // namespace

double Table::number(std::size_t row, std::size_t col) const {
    double v = 0;
    if (!parse_double(rows.at(row).at(col), v))
        throw ArtifactError("cell '" + rows[row][col] + "' is not a number");
    return v;
}

std::string to_csv(const Table& t) {
    std::string out = "# qcspec schema_version=" + std::to_string(kSchemaVersion) + " kind=" + t.kind + "\n";
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cells[i].find_first_of(",\n") != std::string::npos)
                throw InvalidArgument("CSV cell may not contain ',' or a newline");
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(t.columns);
    for (const auto& r : t.rows) line(r);
    return out;
}

Table parse_csv(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    int no = 0;
    auto fail = [&](const std::string& what) -> ArtifactError {
        return ArtifactError(source + ":" + std::to_string(no) + ": " + what);
    };
    Table t;
    ++no;
    if (!std::getline(in, line)) throw fail("empty file");
    const std::string prefix = "# qcspec schema_version=";
    if (line.rfind(prefix, 0) != 0) throw fail("missing '# qcspec schema_version=' line");
    {
        std::istringstream h(line.substr(prefix.size()));
        int version = 0;
        std::string kind;
        h >> version >> kind;
        if (version != kSchemaVersion)
            throw fail("unsupported schema_version " + std::to_string(version));
        if (kind.rfind("kind=", 0) != 0 || kind.size() == 5) throw fail("missing kind");
        t.kind = kind.substr(5);
    }
    ++no;
    if (!std::getline(in, line)) throw fail("missing header row");
    t.columns = split(line);
    while (std::getline(in, line)) {
        ++no;
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != t.columns.size())
            throw fail("expected " + std::to_string(t.columns.size()) + " cells, found " +
                       std::to_string(cells.size()));
        t.rows.push_back(std::move(cells));
    }
    return t;
}

void write_table(const Table& t, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ArtifactError("cannot write " + path);
    f << to_csv(t);
    if (!f) throw ArtifactError("write failed: " + path);
}

Table read_table(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ArtifactError("cannot read " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return parse_csv(s.str(), path);
}

Table interval_table(const IntervalSet& s) {
    Table t("intervals", {"left", "right"});
    for (const auto& iv : s.intervals()) t.add(iv.left, iv.right);
    return t;
}

IntervalSet intervals_from(const Table& t) {
    if (t.kind != "intervals") throw ArtifactError("expected an intervals table, got '" + t.kind + "'");
    const auto l = t.column("left"), r = t.column("right");
    std::vector<Interval> v;
    for (std::size_t i = 0; i < t.rows.size(); ++i) v.push_back({t.number(i, l), t.number(i, r)});
    return IntervalSet(std::move(v));
}

void write_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ArtifactError("cannot write " + path);
    f << j.dump(2) << '\n';
}

nlohmann::json Manifest::to_json() const {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["tool"] = "qcspec";
    j["version"] = QCSPEC_VERSION;
    j["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                 std::to_string(EIGEN_MINOR_VERSION);
    j["command"] = command;
    j["parameters"] = parameters;
    j["results"] = results;
    j["artifacts"] = nlohmann::json::array();
    for (const auto& [file, kind] : artifacts) j["artifacts"].push_back({{"file", file}, {"kind", kind}});
    return j;
}

nlohmann::json CompareReport::to_json() const {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = kind;
    j["tolerance"] = tolerance;
    j["identical"] = identical();
    if (kind == "intervals") j["symmetric_difference"] = symmetric_difference;
    j["max_abs_delta"] = max_abs_delta;
    j["differences"] = differences;
    return j;
}

CompareReport compare_tables(const Table& a, const Table& b, double tolerance) {
    if (a.kind != b.kind) throw ArtifactError("cannot compare '" + a.kind + "' with '" + b.kind + "'");
    if (!(tolerance >= 0)) throw InvalidArgument("tolerance must be non-negative");
    CompareReport out;
    out.kind = a.kind;
    out.tolerance = tolerance;
    if (a.kind == "intervals") {
        const auto sa = intervals_from(a), sb = intervals_from(b);
        out.symmetric_difference = sa.symmetric_difference(sb);
        if (out.symmetric_difference > tolerance)
            out.differences.push_back("symmetric difference " + format_number(out.symmetric_difference));
        return out;
    }
    if (a.columns != b.columns) {
        out.differences.push_back("columns differ");
        return out;
    }
    if (a.rows.size() != b.rows.size())
        out.differences.push_back("row count " + std::to_string(a.rows.size()) + " vs " +
                                  std::to_string(b.rows.size()));
    const std::size_t n = std::min(a.rows.size(), b.rows.size());
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < a.columns.size(); ++c) {
            const auto& x = a.rows[r][c];
            const auto& y = b.rows[r][c];
            if (x == y) continue;
            double u = 0, v = 0;
            if (parse_double(x, u) && parse_double(y, v)) {
                const double d = std::abs(u - v);
                if (std::isnan(d) || d > tolerance) {
                    out.max_abs_delta = std::max(out.max_abs_delta, std::isnan(d) ? INFINITY : d);
                    out.differences.push_back("row " + std::to_string(r + 1) + " " + a.columns[c] + ": " + x +
                                              " vs " + y);
                } else {
                    out.max_abs_delta = std::max(out.max_abs_delta, d);
                }
            } else {
                out.differences.push_back("row " + std::to_string(r + 1) + " " + a.columns[c] + ": '" + x +
                                          "' vs '" + y + "'");
            }
        }
    }
    return out;
}

}  // namespace qcs
