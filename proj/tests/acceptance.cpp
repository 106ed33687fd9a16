// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "qcspec/cli.hpp"
#include "qcspec/cmv.hpp"
#include "qcspec/dynamics.hpp"
#include "qcspec/fit.hpp"
#include "qcspec/generators.hpp"
#include "qcspec/parallel.hpp"
#include "qcspec/presets.hpp"
#include "qcspec/spectrum.hpp"
#include "qcspec/tracemap.hpp"
#include "qcspec/words.hpp"

using namespace qcs;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char b[64];
    std::snprintf(b, sizeof b, f, x);
    return b;
}

// 1 -------------------------------------------------------------------------
Outcome trace_invariant() {
    std::mt19937_64 rng(20240601);
    double worst = 0;
    for (double lambda : {0.1, 1.0, 5.0, 8.0}) {
        std::uniform_real_distribution<double> u(-3 - lambda, 3 + lambda);
        std::vector<double> es(1000);
        for (auto& e : es) e = u(rng);
        std::vector<double> dev(es.size());
        parallel_for(es.size(), [&](std::size_t i) { dev[i] = audit_fib_invariant(lambda, es[i], 30).max_deviation; });
        for (double d : dev) worst = std::max(worst, d / (1 + lambda * lambda));
    }
    return {worst <= 1e-9, "max |I_k - (1 + lambda^2/4)| / (1 + lambda^2) = " + fmt("%.3g", worst)};
}

// 2 -------------------------------------------------------------------------
Outcome standard_word_list() {
    const auto cf = ContinuedFraction::periodic({1}, 22);
    const auto sw = standard_words(cf, 20);
    const std::vector<std::string> want{"1", "10", "101", "10110", "10110101"};
    bool ok = true;
    for (int k = 1; k <= 5; ++k) ok = ok && format_word(sw[k], sw.alphabet) == want[static_cast<std::size_t>(k - 1)];
    for (int k = 1; k <= 20; ++k) ok = ok && BigInt(sw[k].size()) == cf.q(k);
    return {ok, "w_1..w_5 and |w_k| = q_k for k <= 20"};
}

// 3 -------------------------------------------------------------------------
Outcome sturmian_prefix() {
    const auto sw = standard_words(ContinuedFraction::periodic({1}, 14), 12);
    const auto params = sturmian_params({1}, 0.0, 1000);
    bool ok = true;
    for (int k = 1; k <= 12; ++k) {
        const auto q = static_cast<Index>(sw[k].size());
        ok = ok && sturmian_window(params, 1, q + 1).symbols == sw[k];
    }
    return {ok, "s_1..s_{q_k} = w_k for k <= 12"};
}

// 4 -------------------------------------------------------------------------
Outcome complexity() {
    bool ok = true;
    const auto st = complexity_profile(preset_window(Catalog::builtin().at("golden_sturmian"), 0, 4096), 60);
    for (int n = 1; n <= 60; ++n) ok = ok && st.p(n) == n + 1;
    ok = ok && st.aperiodic && !st.period;
    const auto flat = complexity_profile(Window::from_string(std::string(4096, '0')), 60);
    for (int n = 1; n <= 60; ++n) ok = ok && flat.p(n) == 1;
    int detected = 0;
    for (const std::string unit : {"01", "001", "0110", "01011", "0010111"}) {
        std::string s;
        while (s.size() < 4096) s += unit;
        const auto prof = complexity_profile(Window::from_string(s), 60);
        if (prof.period && *prof.period == static_cast<Index>(unit.size())) ++detected;
    }
    ok = ok && detected == 5;
    return {ok, "Sturmian p(n) = n+1 (n <= 60), constant p = 1, periods found " + std::to_string(detected) + "/5"};
}

// 5 -------------------------------------------------------------------------
Outcome substitution_prefixes() {
    const auto cat = Catalog::builtin();
    auto pre = [&](const std::string& name, Index len) { return preset_window(cat.at(name), 0, len).to_string(); };
    bool ok = pre("fibonacci", 13) == "1011010110110" && pre("thue_morse", 12) == "100101100110" &&
              pre("period_doubling", 18) == "101110101011101110" && pre("rudin_shapiro", 16) == "1213124212134313";
    const auto& tm = cat.at("thue_morse").substitution->substitution;
    const auto& rs = cat.at("rudin_shapiro").substitution->substitution;
    ok = ok && substitution_fixed_point(tm, tm.alphabet().index_of("0"), 16).to_string() == "0110100110010110";
    ok = ok && substitution_fixed_point(rs, rs.alphabet().index_of("4"), 16).to_string() == "4342431343421242";
    return {ok, "Fibonacci, Thue-Morse, period doubling and Rudin-Shapiro prefixes"};
}

// 6 -------------------------------------------------------------------------
Outcome nesting() {
    bool ok = true;
    std::string detail;
    for (double lambda : {1.0, 5.0}) {
        double previous = INFINITY;
        // spectrum_approx(k) is sigma_k U sigma_{k+1}; its monotone flag checks it against level k-1
        for (int k = 1; k <= 13; ++k) {
            const auto s = spectrum_approx(lambda, k);
            ok = ok && (k == 1 || s.monotone) && s.measure < previous;
            previous = s.measure;
        }
        detail += "lambda " + fmt("%g", lambda) + ": |sigma_13 U sigma_14| = " + fmt("%.4g", previous) + "; ";
    }
    return {ok, detail + "nested within 1e-8, measure strictly decreasing"};
}

// 7 -------------------------------------------------------------------------
Outcome cross_check() {
    const auto sw = standard_words(ContinuedFraction::periodic({1}, 12), 10);
    std::mt19937_64 rng(77);
    double worst = 0;
    for (double lambda : {1.0, 8.0}) {
        std::uniform_real_distribution<double> u(-2 - lambda, 2 + lambda);
        for (int i = 0; i < 100; ++i) {
            const double E = u(rng);
            const auto orb = fib_orbit(lambda, E, 10);
            for (int k = 0; k <= 10; ++k) {
                Potential v{1, {}};
                for (Symbol s : sw[k]) v.values.push_back(lambda * s);
                const double ht = transfer_product(v, E, 1, v.end()).half_trace();
                worst = std::max(worst, std::abs(ht - orb.x(k)) / std::max(1.0, std::abs(ht)));
            }
        }
    }
    return {worst <= 1e-10, "max |1/2 Tr A_{q_k} - x_k| / max(1, |x_k|) = " + fmt("%.3g", worst)};
}

// 8 -------------------------------------------------------------------------
Outcome free_lyapunov() {
    const double g3 = lyapunov(Model::free(), 3.0, 100000).gamma;
    const double g1 = lyapunov(Model::free(), 1.0, 100000).gamma;
    const double want = std::log((3 + std::sqrt(5.0)) / 2);
    return {std::abs(g3 - want) <= 1e-3 && g1 <= 1e-2,
            "gamma(3) = " + fmt("%.6f", g3) + " (exact " + fmt("%.6f", want) + "), gamma(1) = " + fmt("%.2g", g1)};
}

// 9 -------------------------------------------------------------------------
Outcome gordon() {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> pd(1, 60);
    std::uniform_real_distribution<double> vd(-4, 4), ed(-6, 6), ad(0, 2 * std::numbers::pi);
    int two_fail = 0;
    for (int i = 0; i < 10000; ++i) {
        const int p = pd(rng);
        std::vector<double> base(static_cast<std::size_t>(p));
        for (auto& x : base) x = vd(rng);
        Potential v{0, base};
        v.values.insert(v.values.end(), base.begin(), base.end());
        const double a = ad(rng);
        if (!gordon_two_block(v, p, ed(rng), Vector2<double>(std::cos(a), std::sin(a))).satisfied) ++two_fail;
    }
    const Window pdw = preset_window(Catalog::builtin().at("period_doubling"), 0, 8192);
    int structures = 0, three_fail = 0;
    const auto dirs = unit_circle_vectors(32);
    for (Index c = 256; c <= 4096; c += 256) {
        Potential v{-c, {}};
        for (Symbol s : pdw.symbols) v.values.push_back(std::stod(pdw.alphabet.label(s)));
        const auto sq = find_square_periods(v, 1024);
        for (int p : sq.three_block) {
            ++structures;
            for (double E : lin_space(-3, 4, 15))
                for (const auto& u0 : dirs)
                    if (!gordon_three_block(v, p, E, u0).satisfied) ++three_fail;
        }
    }
    return {two_fail == 0 && three_fail == 0 && structures > 0,
            "two-block failures " + std::to_string(two_fail) + "/10000, three-block failures " +
                std::to_string(three_fail) + " over " + std::to_string(structures) + " structures"};
}

// 10 ------------------------------------------------------------------------
Outcome plancherel() {
    double worst = 0;
    for (const char* name : {"free", "golden_sturmian", "thue_morse"}) {
        const auto h = LatticeOperator::centered(make_model(name, 2.0), 1024);
        for (Index n : {0, 3, 10})
            for (double T : {10.0, 50.0, 200.0})
                worst = std::max(worst, plancherel_check(h, delta(h, 0), n, T).relative_discrepancy);
    }
    return {worst < 1e-5, "max relative discrepancy " + fmt("%.3g", worst) + " over 27 cases"};
}

// 11 ------------------------------------------------------------------------
Outcome transport() {
    const auto hf = LatticeOperator::centered(Model::free(), 2048);
    const auto rf = abelian_moments(hf, delta(hf, 0), log_space(10, 320, 8), {2});
    const double free_bm = transport_exponents(rf, 2).beta_minus;

    const auto hr = LatticeOperator::centered(Model::random_signs(8.0, 1), 1024);
    const auto rr = abelian_moments(hr, delta(hr, 0), log_space(10, 1000, 9), {2});
    const double rand_bp = transport_exponents(rr, 2).beta_plus;

    const auto hb = LatticeOperator::centered(make_model("fibonacci", 8.0), 4096);
    const auto rb = abelian_moments(hb, delta(hb, 0), log_space(10, 1000, 9), {2});
    const auto eb = transport_exponents(rb, 2);
    double leak = 0;
    for (double l : rb.leakage) leak = std::max(leak, l);
    const bool ok = free_bm >= 0.95 && rand_bp <= 0.2 && eb.beta_minus >= 0.05 && eb.beta_plus <= 0.95 && leak < 0.01;
    return {ok, "free beta-(2) = " + fmt("%.3f", free_bm) + ", random beta+(2) = " + fmt("%.3f", rand_bp) +
                    ", Fibonacci beta-(2) = " + fmt("%.3f", eb.beta_minus) + ", beta+(2) = " + fmt("%.3f", eb.beta_plus) +
                    ", leakage " + fmt("%.2g", leak)};
}

// 12 ------------------------------------------------------------------------
Outcome cmv() {
    const auto m = make_model("fibonacci", 1.0);
    const auto g = DiskSampling::symbolwise({0.3, 0.7});
    // eps shrinks with the size (one mean eigenvalue spacing); at a fixed eps the
    // truncations only fill in the eps-neighbourhood of the spectrum
    std::vector<double> covered, fixed;
    double unit512 = 1, unit = 0, mod = 0;
    for (Index n : {128, 256, 512, 1024}) {
        const double eps = 2 * std::numbers::pi / static_cast<double>(n);
        const auto s = cmv_spectrum_approx(m, g, n, 1, {eps, 0.01});
        covered.push_back(s.covered[0]);
        fixed.push_back(s.covered[1]);
        if (n == 512) unit512 = s.unitarity_error;
        unit = std::max(unit, s.unitarity_error);
        mod = std::max(mod, s.modulus_error);
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < covered.size(); ++i) decreasing = decreasing && covered[i] < covered[i - 1];
    std::string ladder, fixed_ladder;
    for (double c : covered) ladder += fmt(" %.4f", c);
    for (double c : fixed) fixed_ladder += fmt(" %.4f", c);
    return {unit512 < 1e-10 && mod < 1e-8 && decreasing,
            "unitarity " + fmt("%.2g", unit) + ", modulus " + fmt("%.2g", mod) +
                ", covered arc (eps = 2pi/N) at N = 128..1024:" + ladder + " [eps 0.01:" + fixed_ladder + "]"};
}

// 13 ------------------------------------------------------------------------
std::map<std::string, std::string> run_into(const fs::path& dir) {
    const std::vector<std::vector<std::string>> runs{
        {"generate", "--model", "rudin_shapiro", "--length", "256"},
        {"words", "--model", "thue_morse", "--complexity", "32", "--length", "2048"},
        {"spectrum", "--model", "fibonacci", "--lambda", "2", "--k", "8", "--zset", "--points", "401", "--n",
         "2000", "--emin", "-4", "--emax", "4", "--phases", "2", "--box"},
        {"trace", "--lambda", "3", "--emin", "-5", "--emax", "5", "--points", "41", "--kmax", "20"},
        {"dynamics", "--model", "thue_morse", "--lambda", "1", "--L", "200", "--tmin", "2", "--tmax", "100",
         "--tpoints", "6", "--p", "1,2"},
        {"cmv", "--model", "fibonacci", "--sizes", "64,128", "--phases", "2", "--eps", "0.02,0.05"},
        {"dynamics", "--model", "random", "--lambda", "2", "--seed", "5", "--L", "150", "--tmin", "2", "--tmax",
         "100", "--tpoints", "6", "--p", "2"},
    };
    std::map<std::string, std::string> files;
    int i = 0;
    for (auto args : runs) {
        const fs::path sub = dir / std::to_string(i++);
        args.insert(args.begin(), "qcspec");
        args.push_back("--out");
        args.push_back(sub.string());
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        if (run_cli(static_cast<int>(argv.size()), argv.data(), out, err) != 0)
            throw Error("run failed: " + err.str());
        for (const auto& e : fs::directory_iterator(sub)) {
            std::ifstream f(e.path(), std::ios::binary);
            std::ostringstream s;
            s << f.rdbuf();
            files[fs::relative(e.path(), dir).string()] = s.str();
        }
    }
    return files;
}

Outcome determinism() {
    const fs::path base = fs::temp_directory_path() / "qcspec_acceptance_determinism";
    fs::remove_all(base);
    const auto a = run_into(base / "a");
    const auto b = run_into(base / "b");
    int differing = 0;
    for (const auto& [name, text] : a)
        if (!b.count(name) || b.at(name) != text) ++differing;
    fs::remove_all(base);
    return {differing == 0 && a.size() == b.size() && !a.empty(),
            std::to_string(a.size()) + " artifacts, " + std::to_string(differing) + " differing"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"trace invariant", trace_invariant},
        {"standard words", standard_word_list},
        {"Sturmian prefix", sturmian_prefix},
        {"complexity", complexity},
        {"substitution fixed points", substitution_prefixes},
        {"band nesting and shrinkage", nesting},
        {"trace map vs transfer matrices", cross_check},
        {"free Lyapunov exponent", free_lyapunov},
        {"Gordon bounds", gordon},
        {"Plancherel identity", plancherel},
        {"transport exponents", transport},
        {"CMV unitarity and arcs", cmv},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failed;
        std::printf("[%s] %2zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
