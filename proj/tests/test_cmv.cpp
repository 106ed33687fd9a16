#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qcspec/cmv.hpp"

using namespace qcs;

namespace {

VerblunskyCoefficients fib_alpha(Index first, Index last) {
    const auto m = make_model("fibonacci", 1.0);
    const auto g = DiskSampling::symbolwise({0.3, 0.7});
    return verblunsky_from_subshift(m.window(first, last), g, first, last);
}

}  // namespace

TEST_CASE("Verblunsky coefficients from a subshift") {
    const auto a = fib_alpha(0, 50);
    CHECK(a.consistency_error() < 1e-12);
    for (std::size_t i = 0; i < a.alpha.size(); ++i) {
        CHECK((a.alpha[i] == Cplx(0.3) || a.alpha[i] == Cplx(0.7)));
        CHECK(a.rho[i] == doctest::Approx(std::sqrt(1 - std::norm(a.alpha[i]))));
    }
    const auto m = make_model("fibonacci", 1.0);
    CHECK_THROWS_AS(verblunsky_from_subshift(m.window(0, 10), DiskSampling::symbolwise({0.3, 1.0}), 0, 10),
                    OutsideDisk);
    const auto z = verblunsky_from_subshift(m.window(0, 10), DiskSampling::symbolwise({0.0, 0.0}), 0, 10);
    for (double r : z.rho) CHECK(r == 1.0);
}

TEST_CASE("half-line CMV entries follow the banded pattern") {
    std::vector<Cplx> v;
    for (int j = 0; j < 12; ++j) v.push_back(std::polar(0.1 + 0.05 * j, 0.7 * j));
    const auto a = VerblunskyCoefficients::from_values(0, v);
    const auto c = build_cmv(a, 10);
    auto al = [&](int j) { return a.a(j); };
    auto rho = [&](int j) { return a.rho[static_cast<std::size_t>(j)]; };
    CHECK(std::abs(c.entry(0, 0) - std::conj(al(0))) < 1e-15);
    CHECK(std::abs(c.entry(0, 1) - std::conj(al(1)) * rho(0)) < 1e-15);
    CHECK(std::abs(c.entry(0, 2) - rho(1) * rho(0)) < 1e-15);
    CHECK(std::abs(c.entry(1, 0) - rho(0)) < 1e-15);
    CHECK(std::abs(c.entry(1, 1) + std::conj(al(1)) * al(0)) < 1e-15);
    CHECK(std::abs(c.entry(1, 2) + rho(1) * al(0)) < 1e-15);
    CHECK(std::abs(c.entry(2, 1) - std::conj(al(2)) * rho(1)) < 1e-15);
    CHECK(std::abs(c.entry(2, 3) - std::conj(al(3)) * rho(2)) < 1e-15);
    CHECK(std::abs(c.entry(2, 4) - rho(3) * rho(2)) < 1e-15);
    CHECK(std::abs(c.entry(3, 1) - rho(2) * rho(1)) < 1e-15);
    CHECK(std::abs(c.entry(3, 2) + al(1) * rho(2)) < 1e-15);
    CHECK(std::abs(c.entry(0, 3)) == 0.0);
    CHECK(c.unitarity_error < 1e-14);
    CHECK_THROWS_AS(build_cmv(a, 20), InvalidArgument);
    CHECK_THROWS_AS(build_cmv(a, 5, 0.5), InvalidArgument);
}

TEST_CASE("extended sections are unitary") {
    const auto a = fib_alpha(-400, 400);
    const auto c = build_extended_cmv(a, 0, 512);
    CHECK(c.unitarity_error < 1e-10);
    const auto e = eigenphases(c);
    CHECK(e.modulus_error < 1e-8);
    CHECK(e.phases.size() == 512);
}

TEST_CASE("zero coefficients give the shift") {
    const auto z = VerblunskyCoefficients::from_values(0, std::vector<Cplx>(700, 0.0));
    for (Index n : {64, 128, 512}) {
        const auto c = build_extended_cmv(z, 350, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                const Cplx x = c.matrix(i, j);
                CHECK((x == Cplx(0) || x == Cplx(1) || x == Cplx(-1)));
            }
        const auto p = eigenphases(c).phases;
        double gap = p.front() + 2 * std::numbers::pi - p.back();
        for (std::size_t i = 1; i < p.size(); ++i) gap = std::max(gap, p[i] - p[i - 1]);
        CHECK(gap <= 4 * std::numbers::pi / static_cast<double>(n));
    }
}

TEST_CASE("covered arc") {
    CHECK(covered_arc({0.0, 1.0}, 0.1) == doctest::Approx(0.4));
    CHECK(covered_arc({0.0, 0.05}, 0.1) == doctest::Approx(0.25));
    CHECK(covered_arc({0.1, 2 * std::numbers::pi - 0.05}, 0.1) == doctest::Approx(0.35));
    const auto z = VerblunskyCoefficients::from_values(0, std::vector<Cplx>(1200, 0.0));
    CHECK(cmv_spectrum_approx(z, 512, {0.05}).covered[0] == doctest::Approx(2 * std::numbers::pi));
}

TEST_CASE("constant coefficients leave a gap") {
    const auto h = VerblunskyCoefficients::from_values(0, std::vector<Cplx>(1200, 0.5));
    // the essential spectrum is the arc |theta| >= 2 arcsin(1/2); a section may add one boundary eigenvalue
    const auto s = cmv_spectrum_approx(h, 512, {0.01});
    CHECK(s.covered[0] < 2 * std::numbers::pi - 1.5);
    const auto t = cmv_spectrum_approx(h, 1024, {0.01});
    CHECK(std::abs(t.covered[0] - s.covered[0]) < 0.1);
    CHECK_THROWS_AS(cmv_spectrum_approx(h, 32, {0.01}), InvalidArgument);
}
