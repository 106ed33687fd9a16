#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qcspec/cli.hpp"
#include "qcspec/io.hpp"

using namespace qcs;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status = 0;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "qcspec");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    Run r;
    r.status = run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
    r.out = o.str();
    r.err = e.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("qcspec_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("CSV round trip") {
    Table t("demo", {"x", "label"});
    t.add(0.1, "a");
    t.add(-2.5e-300, "b");
    t.add(Index{7}, "");
    const auto back = parse_csv(to_csv(t));
    CHECK(back.kind == "demo");
    CHECK(back.rows == t.rows);
    CHECK(back.number(0, 0) == 0.1);
    CHECK(format_number(-0.0) == "0");
    CHECK_THROWS_WITH_AS(parse_csv("# qcspec schema_version=1 kind=x\na,b\n1\n", "f.csv"), "f.csv:3: expected 2 cells, found 1",
                         ArtifactError);
    CHECK_THROWS_AS(parse_csv("# qcspec schema_version=9 kind=x\na\n"), ArtifactError);
}

TEST_CASE("compare") {
    const auto a = interval_table(IntervalSet({{0, 1}, {2, 3}}));
    const auto b = interval_table(IntervalSet({{0, 1.1}, {2, 3}}));
    CHECK(compare_tables(a, a, 0).identical());
    const auto d = compare_tables(a, b, 1e-3);
    CHECK_FALSE(d.identical());
    CHECK(d.symmetric_difference == doctest::Approx(0.1));
    CHECK(compare_tables(a, b, 0.2).identical());
    Table n("lyapunov", {"E", "gamma"});
    n.add(0.0, 1.0);
    CHECK_THROWS_AS(compare_tables(a, n, 0), ArtifactError);
    Table m = n;
    m.rows[0][1] = "1.5";
    const auto dm = compare_tables(n, m, 0.1);
    CHECK(dm.differences.size() == 1);
    CHECK(dm.max_abs_delta == doctest::Approx(0.5));
}

TEST_CASE("config errors name the line") {
    RunConfig c;
    c.command = "spectrum";
    CHECK_THROWS_WITH(apply_config_json(c, "{\n  \"lambda\": 2,\n  \"bogus\": 1\n}", "cfg.json"),
                      "cfg.json:3: unknown key 'bogus'");
    CHECK_THROWS_WITH(apply_config_json(c, "{\n  \"lambda\": \"x\"\n}", "cfg.json"),
                      "cfg.json:2: bad value \"x\" for 'lambda'");
    try {
        apply_config_json(c, "{\n  \"lambda\": 2,\n  \"k\": ,\n}", "cfg.json");
        FAIL("no error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).rfind("cfg.json:3: invalid JSON", 0) == 0);
    }
    apply_config_json(c, "{\"lambda\": 3.5, \"cf\": [1, 2]}", "cfg.json");
    CHECK(c.lambda == 3.5);
    CHECK(c.cf == std::vector<std::int64_t>{1, 2});
}

TEST_CASE("validation") {
    RunConfig c;
    c.command = "spectrum";
    c.zset = true;
    c.points = 0;
    CHECK_THROWS_WITH(validate(c), "empty energy grid");
    c.points = 10;
    c.model = "nope";
    CHECK_THROWS_WITH(validate(c), "unknown model 'nope'");
    RunConfig d;
    d.command = "dynamics";
    d.tpoints = 0;
    CHECK_THROWS_WITH(validate(d), "empty T grid");
}

TEST_CASE("spectrum command is deterministic") {
    const auto a = scratch("spec_a"), b = scratch("spec_b");
    for (const auto& dir : {a, b}) {
        const auto r = cli({"spectrum", "--model", "fibonacci", "--lambda", "1", "--k", "6", "--box", "--out", dir.string()});
        REQUIRE(r.status == 0);
    }
    for (const char* f : {"sigma.csv", "box.csv", "manifest.json"}) CHECK(slurp(a / f) == slurp(b / f));
    const auto t = read_table((a / "sigma.csv").string());
    CHECK(t.kind == "intervals");
    const auto c = cli({"compare", (a / "sigma.csv").string(), (b / "sigma.csv").string()});
    CHECK(c.status == 0);
    CHECK(c.out.find("\"differences\": []") != std::string::npos);
    const auto mixed = cli({"compare", (a / "sigma.csv").string(), (a / "box.csv").string()});
    CHECK(mixed.status == 2);
    CHECK(mixed.err.find("cannot compare") != std::string::npos);
}

TEST_CASE("config file overrides flags") {
    const auto dir = scratch("cfg");
    {
        std::ofstream f(dir / "run.json");
        f << "{\n  \"model\": \"thue_morse\",\n  \"complexity\": 32,\n  \"length\": 2048\n}\n";
    }
    const auto r = cli({"words", "--model", "fibonacci", "--config", (dir / "run.json").string(), "--out", dir.string()});
    REQUIRE(r.status == 0);
    const auto t = read_table((dir / "complexity.csv").string());
    CHECK(t.rows.size() == 32);
    // Thue-Morse: p(1..5) = 2, 4, 6, 10, 12
    CHECK(t.rows[2][1] == "6");
    CHECK(t.rows[3][1] == "10");
    {
        std::ofstream f(dir / "bad.json");
        f << "{\n  \"model\": \"thue_morse\",\n  \"lenght\": 5\n}\n";
    }
    const auto bad = cli({"words", "--config", (dir / "bad.json").string(), "--out", dir.string()});
    CHECK(bad.status == 2);
    CHECK(bad.err.find("bad.json:3: unknown key 'lenght'") != std::string::npos);
}

TEST_CASE("other commands write their artifacts") {
    const auto dir = scratch("cmds");
    CHECK(cli({"generate", "--model", "period_doubling", "--length", "18", "--out", dir.string()}).status == 0);
    const auto g = read_table((dir / "sequence.csv").string());
    std::string s;
    for (const auto& row : g.rows) s += row[1];
    CHECK(s == "101110101011101110");
    CHECK(cli({"trace", "--lambda", "2", "--energies", "0.5,3", "--kmax", "12", "--out", dir.string()}).status == 0);
    CHECK(read_table((dir / "escape.csv").string()).rows.size() == 2);
    CHECK(slurp(dir / "manifest.json").find("\"escape_condition\": \"proved\"") != std::string::npos);
    CHECK(cli({"trace", "--model", "silver_sturmian", "--lambda", "2", "--energies", "0.5,4", "--kmax", "8", "--out",
               dir.string()})
              .status == 0);
    CHECK(slurp(dir / "manifest.json").find("\"escape_condition\": \"assumed\"") != std::string::npos);
    CHECK(cli({"trace", "--model", "thue_morse", "--out", dir.string()}).status == 2);
    CHECK(cli({"cmv", "--model", "fibonacci", "--sizes", "64,128", "--eps", "0.05", "--out", dir.string()}).status == 0);
    CHECK(read_table((dir / "eigenphases.csv").string()).rows.size() == 192);
    CHECK(cli({"dynamics", "--model", "free", "--L", "200", "--tmin", "2", "--tmax", "80", "--tpoints", "6", "--p", "2",
               "--out", dir.string()})
              .status == 0);
    const auto tr = read_table((dir / "transport.csv").string());
    CHECK(tr.columns == std::vector<std::string>{"T", "p", "moment", "beta_minus", "beta_plus", "leakage"});
    CHECK(cli({"spectrum", "--model", "thue_morse", "--out", dir.string()}).status == 2);
    CHECK(cli({"spectrum", "--model", "fibonacci", "--zset", "--points", "0", "--out", dir.string()}).status == 2);
}
