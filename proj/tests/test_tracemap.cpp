#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "qcspec/generators.hpp"
#include "qcspec/schrodinger.hpp"
#include "qcspec/tracemap.hpp"

using namespace qcs;

namespace {

// 1/2 Tr of the transfer matrix over the word, V = lambda * symbol
double word_half_trace(const Word& w, double lambda, double E) {
    Potential v{0, {}};
    for (Symbol s : w) v.values.push_back(lambda * s);
    return transfer_product(v, E, 0, static_cast<Index>(w.size())).half_trace();
}

}  // namespace

TEST_CASE("Fibonacci trace map equals transfer-matrix half traces") {
    const auto sw = standard_words(ContinuedFraction::periodic({1}, 12), 10);
    std::mt19937_64 rng(1);
    for (double lambda : {1.0, 8.0}) {
        std::uniform_real_distribution<double> u(-2 - lambda, 2 + lambda);
        for (int i = 0; i < 20; ++i) {
            const double E = u(rng);
            const auto orb = fib_orbit(lambda, E, 10);
            for (int k = 0; k <= 10; ++k) {
                const double want = word_half_trace(sw[k], lambda, E);
                CHECK(std::abs(orb.x(k) - want) <= 1e-10 * std::max(1.0, std::abs(want)));
            }
        }
    }
}

TEST_CASE("general Sturmian trace recursion") {
    const ContinuedFraction cf({2, 1, 3, 1, 2, 2});
    const auto sw = standard_words(cf, 6);
    for (double E : {-1.7, 0.2, 2.9}) {
        const auto orb = sturmian_orbit(2.0, cf, E, 6);
        for (int k = 0; k <= 6; ++k) {
            const double want = word_half_trace(sw[k], 2.0, E);
            CHECK(std::abs(orb.x(k) - want) <= 1e-9 * std::max(1.0, std::abs(want)));
            CHECK(half_trace(2.0, cf, k, E) == doctest::Approx(want).epsilon(1e-9));
        }
        // evaluated in double, so the error scales with the size of the cancelling terms
        for (int k = 0; k <= 6; ++k) {
            const double inv = orb.invariant[static_cast<std::size_t>(k)];
            if (!std::isfinite(inv)) continue;
            const double xa = orb.x(k - 1), xb = orb.x(k);
            const double scale = std::max({1.0, xa * xa + xb * xb, std::abs(xa * xb) * std::max(1.0, std::abs(xa * xb))});
            CHECK(std::abs(inv - 2.0) <= 1e-13 * scale);
        }
    }
}

TEST_CASE("matrix powers by Cayley-Hamilton") {
    ScaledMatrix<double> m;
    m.mantissa << 1.3, -0.4, 0.9, 0.5;
    Eigen::Matrix2d p = Eigen::Matrix2d::Identity();
    CHECK_THROWS_AS(matrix_power(m, 0), InvalidArgument);
    for (int a = 0; a <= 12; ++a) {
        if (a == 0) {
            p = p * m.mantissa;
            continue;
        }
        const auto got = matrix_power(m, a);
        const Eigen::Matrix2d v = got.mantissa * std::ldexp(1.0, static_cast<int>(got.exponent));
        CHECK((v - p).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, p.cwiseAbs().maxCoeff()));
        p = p * m.mantissa;
    }
}

TEST_CASE("invariant along short orbits in double precision") {
    for (double lambda : {0.1, 1.0, 5.0})
        for (double E : {-1.0, 0.5, 2.0}) {
            const auto orb = fib_orbit(lambda, E, 12);
            for (int k = 0; k < orb.k_max(); ++k) {
                const double inv = orb.invariant[static_cast<std::size_t>(k)];
                if (!std::isfinite(inv)) continue;
                // rounding in the cancelling terms bounds what double precision can show
                const double a = orb.x(k + 1), b = orb.x(k), c = orb.x(k - 1);
                const double scale = std::max(1.0, a * a + b * b + c * c + 2 * std::abs(a * b * c));
                CHECK(std::abs(inv - orb.expected_invariant()) <= 1e-14 * scale);
            }
        }
}

TEST_CASE("escape classification") {
    const auto orb = fib_orbit(1.0, 5.0, 20);
    const auto esc = escape_classify(orb);
    CHECK_FALSE(esc.assumed_condition);
    const auto silver = escape_classify(sturmian_orbit(1.0, ContinuedFraction::periodic({2}, 12), 5.0, 12));
    CHECK(silver.kind == EscapeReport::Kind::Escaped);
    CHECK(silver.assumed_condition);
    CHECK(esc.kind == EscapeReport::Kind::Escaped);
    CHECK(esc.super_growth);
    CHECK(esc.growth_constant > 1.0);
    CHECK_FALSE(b_infty_member(1.0, 5.0, 20));
    // a band centre of sigma_12 stays bounded for many steps
    const auto s = sigma_k(1.0, 12);
    const auto& iv = s.bands.intervals()[s.bands.size() / 2];
    const double mid = 0.5 * (iv.left + iv.right);
    CHECK(std::abs(half_trace(1.0, ContinuedFraction::periodic({1}, 14), 12, mid)) <= 1.0);
}

TEST_CASE("band sets") {
    for (double lambda : {5.0, 8.0}) {
        for (int k : {3, 6, 9}) {
            const auto s = sigma_k(lambda, k);
            const auto cf = ContinuedFraction::periodic({1}, k + 1);
            CHECK(BigInt(s.band_count) == cf.q(k));
            CHECK(s.certified_edges == 2 * s.band_count);
            for (const auto& iv : s.bands.intervals()) {
                CHECK(std::abs(half_trace(lambda, cf, k, 0.5 * (iv.left + iv.right))) <= 1.0 + 1e-9);
                CHECK(std::abs(std::abs(half_trace(lambda, cf, k, iv.left)) - 1.0) < 1e-6);
            }
        }
    }
}

TEST_CASE("complex escape time agrees with the complex orbit") {
    for (std::complex<double> z : {std::complex<double>(0.3, 0.5), std::complex<double>(1.1, 0.05),
                                   std::complex<double>(-2.0, 0.2)}) {
        const auto t = complex_escape_time(8.0, z, 30);
        const auto orb = fib_orbit(8.0, z, 32);
        std::optional<int> want;
        for (int k = 0; k < 31 && !want; ++k)
            if (std::abs(orb.x(k)) > 1 && std::abs(orb.x(k + 1)) > 1) want = k;
        CHECK(t == want);
    }
}

TEST_CASE("multiprecision invariant audit") {
    std::mt19937_64 rng(3);
    for (double lambda : {1.0, 8.0}) {
        std::uniform_real_distribution<double> u(-3 - lambda, 3 + lambda);
        for (int i = 0; i < 5; ++i) {
            const auto a = audit_fib_invariant(lambda, u(rng), 25);
            CHECK(a.max_deviation <= 1e-9 * (1 + lambda * lambda));
        }
    }
    const auto a = audit_fib_invariant(1.0, 0.5, 8);
    CHECK(a.max_deviation < 1e-20);
}
