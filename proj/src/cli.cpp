#include "qcspec/cli.hpp"

#include <algorithm>
#include <complex>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"

#include "qcspec/cmv.hpp"
#include "qcspec/dynamics.hpp"
#include "qcspec/fit.hpp"
#include "qcspec/io.hpp"
#include "qcspec/parallel.hpp"
#include "qcspec/spectrum.hpp"
#include "qcspec/tracemap.hpp"

namespace qcs {

namespace {

using Json = nlohmann::json;
using Slot = std::variant<double*, int*, Index*, std::uint64_t*, bool*, std::string*, std::vector<double>*,
                          std::vector<Index>*, std::vector<std::string>*>;

struct Param {
    std::string name;
    Slot slot;
    std::string help;
};

std::vector<Param> params(RunConfig& c) {
    return {
        {"model", &c.model, "preset name, free, constant, random or sturmian"},
        {"lambda", &c.lambda, "coupling"},
        {"theta", &c.theta, "Sturmian slope in (0,1); overrides model"},
        {"cf", &c.cf, "Sturmian coefficient pattern, repeated"},
        {"phi", &c.phi, "Sturmian phase"},
        {"seed", &c.seed, "random seed"},
        {"catalog", &c.catalog, "preset catalog JSON"},
        {"first", &c.first, "first site"},
        {"length", &c.length, "window length"},
        {"complexity", &c.complexity, "largest factor length"},
        {"k", &c.k, "approximant level"},
        {"zset", &c.zset, "scan the Lyapunov zero set"},
        {"emin", &c.emin, "energy grid start"},
        {"emax", &c.emax, "energy grid end"},
        {"points", &c.points, "energy grid size"},
        {"n", &c.n, "transfer product length"},
        {"tol", &c.tol, "tolerance (zero set threshold, compare tolerance)"},
        {"phases", &c.phases, "phase samples"},
        {"box", &c.box, "box-counting dimension of the approximant"},
        {"energies", &c.energies, "explicit energies"},
        {"kmax", &c.kmax, "trace map depth"},
        {"audit", &c.audit, "high-precision invariant audit"},
        {"L", &c.L, "lattice half-width"},
        {"tmin", &c.tmin, "smallest T"},
        {"tmax", &c.tmax, "largest T"},
        {"tpoints", &c.tpoints, "number of T values"},
        {"p", &c.p, "moment orders"},
        {"alpha", &c.alpha, "Verblunsky value per symbol (real part)"},
        {"alpha_im", &c.alpha_im, "imaginary parts"},
        {"sizes", &c.sizes, "CMV truncation sizes"},
        {"eps", &c.eps, "arc radii"},
        {"files", &c.files, "artifacts to compare"},
        {"out", &c.out, "output directory"},
        {"workers", &c.workers, "worker threads"},
    };
}

int line_of(const std::string& text, std::size_t pos) {
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(std::min(pos, text.size())), '\n'));
}

int key_line(const std::string& text, const std::string& key) {
    const auto pos = text.find("\"" + key + "\"");
    return pos == std::string::npos ? 0 : line_of(text, pos);
}

Json config_json(const RunConfig& c) {
    Json j;
    RunConfig copy = c;
    for (const auto& p : params(copy)) {
        if (p.name == "out" || p.name == "workers" || p.name == "files") continue;
        std::visit([&](auto* v) { j[p.name] = *v; }, p.slot);
    }
    return j;
}

// ---------------------------------------------------------------------------

Model model_of(const RunConfig& c) {
    const Catalog cat = c.catalog.empty() ? Catalog::builtin() : Catalog::from_file(c.catalog);
    if (c.theta != 0.0) {
        // coefficients until q_k passes what a double can resolve
        std::vector<std::int64_t> a;
        for (int d = 1;; ++d) {
            ContinuedFraction cf;
            try {
                cf = continued_fraction(c.theta, d);
            } catch (const RationalTheta& e) {
                throw ConfigError("theta " + format_number(c.theta) + " is rational at working precision; " +
                                  "use a periodic model");
            }
            if (cf.q(d) > BigInt(100000000) || d >= 60) {
                a = cf.coefficients();
                break;
            }
        }
        return Model::sturmian(a, c.lambda, c.phi);
    }
    return make_model(c.model, c.lambda, cat, c.seed, c.cf, c.phi);
}

struct Output {
    std::filesystem::path dir;
    Manifest manifest;

    void table(const Table& t, const std::string& file) {
        write_table(t, (dir / file).string());
        manifest.artifacts.emplace_back(file, t.kind);
    }
    void finish() { write_json(manifest.to_json(), (dir / "manifest.json").string()); }
};

std::string symbol_label(const Window& w, Index n) {
    return w.alphabet.labels().at(w.at(n));
}

void cmd_generate(const RunConfig& c, Output& o) {
    const Model m = model_of(c);
    const Index last = c.first + c.length;
    const Potential v = m.potential(c.first, last);
    Table t("sequence", {"n", "symbol", "V"});
    std::optional<Window> w;
    if (m.symbolic()) w = m.window(c.first, last);
    for (Index n = c.first; n < last; ++n)
        t.add(n, w ? symbol_label(*w, n) : std::string(), v.values[static_cast<std::size_t>(n - c.first)]);
    o.table(t, "sequence.csv");
}

void cmd_words(const RunConfig& c, Output& o) {
    const Model m = model_of(c);
    if (!m.symbolic()) throw ConfigError("words needs a symbolic model, not '" + m.name + "'");
    const Window w = m.window(c.first, c.first + c.length);
    const auto prof = complexity_profile(w, c.complexity);
    Table t("complexity", {"n", "p", "saturated"});
    for (int n = 1; n <= prof.n_max; ++n)
        t.add(n, prof.p(n), prof.saturated[static_cast<std::size_t>(n - 1)] ? 1 : 0);
    o.table(t, "complexity.csv");
    o.manifest.results["aperiodic"] = prof.aperiodic;
    o.manifest.results["period"] = prof.period ? Json(*prof.period) : Json(nullptr);
}

void cmd_spectrum(const RunConfig& c, Output& o) {
    const Model m = model_of(c);
    const auto pattern = m.cf_pattern();
    if (!pattern && !c.zset) throw ConfigError("band approximants need a Sturmian model; use --zset for '" + m.name + "'");
    if (pattern) {
        const auto cf = ContinuedFraction::periodic(*pattern, c.k + 2);
        const auto s = spectrum_approx(c.lambda, cf, c.k);
        o.table(interval_table(s.set), "sigma.csv");
        o.manifest.results["sigma"] = {{"k", s.k}, {"measure", s.measure}, {"band_count", s.band_count},
                                       {"monotone", s.monotone}};
        if (c.box) {
            const auto& iv = s.set.intervals();
            const double diam = iv.back().right - iv.front().left;
            const auto b = box_dimension(s.set, box_scales(s.set, diam * 1e-4));
            Table t("box_counts", {"eps", "count"});
            for (std::size_t i = 0; i < b.scales.size(); ++i) t.add(b.scales[i], b.counts[i]);
            o.table(t, "box.csv");
            o.manifest.results["box_dimension"] = {{"dimension", b.dimension}, {"residual", b.residual},
                                                   {"degenerate", b.degenerate}};
        }
    }
    if (c.zset) {
        const auto z = zset_scan(m, lin_space(c.emin, c.emax, c.points), c.n, c.tol, c.phases);
        Table t("lyapunov", {"E", "gamma", "spread"});
        for (std::size_t i = 0; i < z.grid.size(); ++i) t.add(z.grid[i], z.gamma[i], z.spread[i]);
        o.table(t, "lyapunov.csv");
        o.table(interval_table(z.set), "zset.csv");
        o.manifest.results["zset"] = {{"measure", z.set.measure()}, {"intervals", z.set.size()}};
    }
}

std::vector<double> energies_of(const RunConfig& c) {
    return c.energies.empty() ? lin_space(c.emin, c.emax, c.points) : c.energies;
}

void cmd_trace(const RunConfig& c, Output& o) {
    const auto es = energies_of(c);
    const auto pattern = model_of(c).cf_pattern();
    if (!pattern) throw ConfigError("trace needs a Sturmian model, not '" + c.model + "'");
    const bool golden = std::all_of(pattern->begin(), pattern->end(), [](std::int64_t a) { return a == 1; });
    if (c.audit && !golden) throw ConfigError("--audit is only available for the golden-mean model");
    // log|x_k| for k = -1..kmax and the invariant for k = 0.. per energy
    std::vector<std::vector<double>> logs(es.size()), invs(es.size());
    std::vector<EscapeReport> esc(es.size());
    const auto cf = ContinuedFraction::periodic(*pattern, c.kmax + 1);
    parallel_for(es.size(), [&](std::size_t i) {
        auto record = [&](const auto& orb) {
            for (int k = -1; k <= orb.k_max(); ++k) logs[i].push_back(orb.log_abs(k));
            invs[i] = orb.invariant;
            esc[i] = escape_classify(orb);
        };
        if (golden) record(fib_orbit(c.lambda, es[i], c.kmax));
        else record(sturmian_orbit(c.lambda, cf, es[i], c.kmax));
    });
    Table t("trace", {"E", "k", "log_abs_x", "invariant"});
    Table e("escape", {"E", "escaped", "k0", "max_abs"});
    for (std::size_t i = 0; i < es.size(); ++i) {
        for (std::size_t j = 0; j < logs[i].size(); ++j) {
            const int k = static_cast<int>(j) - 1;
            const double inv = k >= 0 && k < static_cast<int>(invs[i].size()) ? invs[i][static_cast<std::size_t>(k)]
                                                                              : std::nan("");
            t.add(es[i], k, logs[i][j], inv);
        }
        const bool escaped = esc[i].kind == EscapeReport::Kind::Escaped;
        e.add(es[i], escaped ? 1 : 0, esc[i].k0, esc[i].max_abs);
    }
    o.table(t, "trace.csv");
    o.table(e, "escape.csv");
    o.manifest.results["escape_condition"] = golden ? "proved" : "assumed";
    if (c.audit) {
        std::vector<InvariantAudit> au(es.size());
        parallel_for(es.size(), [&](std::size_t i) { au[i] = audit_fib_invariant(c.lambda, es[i], c.kmax); });
        Table a("audit", {"E", "max_deviation", "precision_bits"});
        double worst = 0;
        for (std::size_t i = 0; i < es.size(); ++i) {
            a.add(es[i], au[i].max_deviation, static_cast<Index>(au[i].precision_bits));
            worst = std::max(worst, au[i].max_deviation);
        }
        o.table(a, "audit.csv");
        o.manifest.results["audit_max_deviation"] = worst;
    }
}

void cmd_dynamics(const RunConfig& c, Output& o) {
    const Model m = model_of(c);
    const auto h = LatticeOperator::centered(m, c.L);
    const auto rep = abelian_moments(h, delta(h, 0), log_space(c.tmin, c.tmax, c.tpoints), c.p);
    Table t("transport", {"T", "p", "moment", "beta_minus", "beta_plus", "leakage"});
    Json fits = Json::array();
    for (std::size_t i = 0; i < c.p.size(); ++i) {
        double bm = std::nan(""), bp = std::nan("");
        try {
            const auto ex = transport_exponents(rep, c.p[i]);
            bm = ex.beta_minus;
            bp = ex.beta_plus;
            fits.push_back({{"p", c.p[i]}, {"beta_minus", bm}, {"beta_plus", bp}, {"beta", ex.beta}});
        } catch (const InsufficientSpan& e) {
            fits.push_back({{"p", c.p[i]}, {"error", e.what()}});
        }
        for (std::size_t j = 0; j < rep.T.size(); ++j) t.add(rep.T[j], c.p[i], rep.moments[i][j], bm, bp, rep.leakage[j]);
    }
    o.table(t, "transport.csv");
    o.manifest.results["exponents"] = fits;
    o.manifest.results["usable"] = rep.usable();
    o.manifest.results["eigenpairs_used"] = rep.eigenpairs_used;
}

void cmd_cmv(const RunConfig& c, Output& o) {
    const Model m = model_of(c);
    if (!m.symbolic()) throw ConfigError("cmv needs a symbolic model, not '" + m.name + "'");
    std::vector<Cplx> values;
    for (std::size_t i = 0; i < c.alpha.size(); ++i)
        values.emplace_back(c.alpha[i], i < c.alpha_im.size() ? c.alpha_im[i] : 0.0);
    const auto g = DiskSampling::symbolwise(values);
    const std::vector<double> eps = c.eps.empty() ? std::vector<double>{2 * std::numbers::pi / 256} : c.eps;
    Table ph("eigenphases", {"size", "phase"});
    Table arcs("covered_arc", {"size", "eps", "covered"});
    Json checks = Json::array();
    for (Index size : c.sizes) {
        const auto s = cmv_spectrum_approx(m, g, size, c.phases, eps);
        for (double t : s.eigenphases) ph.add(size, t);
        for (std::size_t i = 0; i < eps.size(); ++i) arcs.add(size, eps[i], s.covered[i]);
        checks.push_back({{"size", size}, {"unitarity_error", s.unitarity_error},
                          {"modulus_error", s.modulus_error}});
    }
    const Index big = *std::max_element(c.sizes.begin(), c.sizes.end());
    const auto alpha = verblunsky_from_subshift(m.window(-big / 2 - g.M, big / 2 + g.N + 1), g, -big / 2, big / 2);
    Table co("verblunsky", {"index", "re_alpha", "im_alpha"});
    for (Index n = alpha.first; n < alpha.end(); ++n) co.add(n, alpha.a(n).real(), alpha.a(n).imag());
    o.table(co, "verblunsky.csv");
    o.table(ph, "eigenphases.csv");
    o.table(arcs, "covered_arc.csv");
    o.manifest.results["truncations"] = checks;
}

int cmd_compare(const RunConfig& c, std::ostream& out) {
    const auto r = compare_tables(read_table(c.files[0]), read_table(c.files[1]), c.tol);
    out << r.to_json().dump(2) << '\n';
    return r.identical() ? 0 : 1;
}

}  // namespace

// ---------------------------------------------------------------------------

void apply_config_json(RunConfig& c, const std::string& text, const std::string& source) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        const int line = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ConfigError(source + ":" + std::to_string(line) + ": invalid JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw ConfigError(source + ":1: config must be a JSON object");
    auto ps = params(c);
    for (const auto& [key, value] : j.items()) {
        const std::string where = source + ":" + std::to_string(key_line(text, key)) + ": ";
        if (key == "schema_version") {
            if (value != kSchemaVersion) throw ConfigError(where + "unsupported schema_version");
            continue;
        }
        if (key == "command") {
            if (!value.is_string() || value.get<std::string>() != c.command)
                throw ConfigError(where + "config is for command " + value.dump() + ", not '" + c.command + "'");
            continue;
        }
        const auto it = std::find_if(ps.begin(), ps.end(), [&](const Param& p) { return p.name == key; });
        if (it == ps.end()) throw ConfigError(where + "unknown key '" + key + "'");
        try {
            std::visit([&](auto* v) { *v = value.get<std::remove_pointer_t<decltype(v)>>(); }, it->slot);
        } catch (const Json::exception&) {
            throw ConfigError(where + "bad value " + value.dump() + " for '" + key + "'");
        }
    }
}

void validate(const RunConfig& c) {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    static const std::vector<std::string> commands{"generate", "words", "spectrum", "trace",
                                                   "dynamics", "cmv",   "compare"};
    if (std::find(commands.begin(), commands.end(), c.command) == commands.end()) fail("unknown command '" + c.command + "'");
    if (c.command == "compare") {
        if (c.files.size() != 2) fail("compare needs exactly two files");
        if (!(c.tol >= 0)) fail("tol must be >= 0");
        return;
    }
    if (!std::isfinite(c.lambda)) fail("lambda must be finite");
    if (c.theta != 0.0 && !(c.theta > 0 && c.theta < 1)) fail("theta must lie in (0, 1)");
    if (c.theta == 0.0) {
        const Catalog cat = c.catalog.empty() ? Catalog::builtin() : Catalog::from_file(c.catalog);
        static const std::vector<std::string> builtin{"free", "constant", "random", "sturmian"};
        if (std::find(builtin.begin(), builtin.end(), c.model) == builtin.end() && !cat.contains(c.model))
            fail("unknown model '" + c.model + "'");
        if (c.model == "sturmian" && c.cf.empty()) fail("sturmian model needs cf");
    }
    if (c.length < 1) fail("length must be >= 1");
    if (c.complexity < 1) fail("complexity must be >= 1");
    if (c.k < 1) fail("k must be >= 1");
    if (c.phases < 1) fail("phases must be >= 1");
    if (c.workers < 0) fail("workers must be >= 0");
    if (c.command == "spectrum" && c.zset) {
        if (c.points < 1 || !(c.emin <= c.emax)) fail("empty energy grid");
        if (c.n < 100) fail("n must be >= 100");
    }
    if (c.command == "trace") {
        if (c.energies.empty() && (c.points < 1 || !(c.emin <= c.emax))) fail("empty energy grid");
        if (c.kmax < 1) fail("kmax must be >= 1");
    }
    if (c.command == "dynamics") {
        if (c.tpoints < 1 || !(c.tmin > 0) || !(c.tmin <= c.tmax)) fail("empty T grid");
        if (c.p.empty()) fail("empty moment list");
        if (c.L < 1) fail("L must be >= 1");
    }
    if (c.command == "cmv") {
        if (c.sizes.empty()) fail("empty size list");
        if (c.alpha.empty()) fail("alpha needs one value per symbol");
    }
}

int run(const RunConfig& c, std::ostream& out) {
    validate(c);
    if (c.command == "compare") return cmd_compare(c, out);
    std::filesystem::create_directories(c.out);
    Output o{c.out, {}};
    o.manifest.command = c.command;
    o.manifest.parameters = config_json(c);
    if (c.command == "generate") cmd_generate(c, o);
    else if (c.command == "words") cmd_words(c, o);
    else if (c.command == "spectrum") cmd_spectrum(c, o);
    else if (c.command == "trace") cmd_trace(c, o);
    else if (c.command == "dynamics") cmd_dynamics(c, o);
    else if (c.command == "cmv") cmd_cmv(c, o);
    o.finish();
    for (const auto& [file, kind] : o.manifest.artifacts) out << (o.dir / file).string() << '\n';
    out << (o.dir / "manifest.json").string() << '\n';
    return 0;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quasicrystal spectral toolkit"};
    app.require_subcommand(1);
    RunConfig c;
    std::string config;
    const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
        {"generate", {"model", "lambda", "theta", "cf", "phi", "seed", "catalog", "first", "length"}},
        {"words", {"model", "lambda", "theta", "cf", "phi", "seed", "catalog", "first", "length", "complexity"}},
        {"spectrum", {"model", "lambda", "theta", "cf", "phi", "seed", "catalog", "k", "zset", "emin", "emax",
                      "points", "n", "tol", "phases", "box"}},
        {"trace", {"model", "lambda", "theta", "cf", "catalog", "energies", "emin", "emax", "points", "kmax", "audit"}},
        {"dynamics", {"model", "lambda", "theta", "cf", "phi", "seed", "catalog", "L", "tmin", "tmax", "tpoints", "p"}},
        {"cmv", {"model", "theta", "cf", "phi", "catalog", "alpha", "alpha_im", "sizes", "eps", "phases"}},
        {"compare", {"tol"}},
    };
    auto ps = params(c);
    auto find = [&](const std::string& n) -> Param& {
        return *std::find_if(ps.begin(), ps.end(), [&](const Param& p) { return p.name == n; });
    };
    for (const auto& [name, keys] : commands) {
        static const std::map<std::string, std::string> about{
            {"generate", "write a window of a sequence model and its potential"},
            {"words", "factor complexity of a window"},
            {"spectrum", "band approximants, box counting and Lyapunov zero sets"},
            {"trace", "trace-map orbits, escape indices and the invariant audit"},
            {"dynamics", "Abelian-averaged moments and transport exponents"},
            {"cmv", "Verblunsky coefficients, CMV eigenphases and covered arcs"},
            {"compare", "compare two artifacts of the same kind"},
        };
        auto* sub = app.add_subcommand(name, about.at(name));
        sub->callback([&c, name = name] { c.command = name; });
        for (const auto& k : keys) {
            Param& p = find(k);
            std::visit(
                [&](auto* v) {
                    using T = std::remove_pointer_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, bool>) sub->add_flag("--" + p.name, *v, p.help);
                    else if constexpr (std::is_same_v<T, std::vector<double>> || std::is_same_v<T, std::vector<Index>>)
                        sub->add_option("--" + p.name, *v, p.help)->delimiter(',');
                    else sub->add_option("--" + p.name, *v, p.help);
                },
                p.slot);
        }
        if (name == "compare") sub->add_option("files", c.files, "two artifacts")->expected(2)->required();
        else {
            sub->add_option("--out,-o", c.out, "output directory");
            sub->add_option("--config", config, "JSON config; its values override flags");
        }
        sub->add_option("--workers", c.workers, "worker threads (default QCSPEC_WORKERS)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    try {
        if (!config.empty()) {
            std::ifstream f(config);
            if (!f) throw ConfigError("cannot read " + config);
            std::ostringstream s;
            s << f.rdbuf();
            apply_config_json(c, s.str(), config);
        }
        if (c.workers > 0) setenv("QCSPEC_WORKERS", std::to_string(c.workers).c_str(), 1);
        return run(c, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace qcs
