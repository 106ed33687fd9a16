#include "doctest.h"

#include <cmath>

#include <boost/math/special_functions/bessel.hpp>

#include "qcspec/dynamics.hpp"
#include "qcspec/fit.hpp"

using namespace qcs;

TEST_CASE("free evolution is a Bessel function") {
    const auto h = LatticeOperator::centered(Model::free(), 400);
    const auto wp = evolve(h, delta(h, 0), 60.0);
    // <delta_n, exp(-itH) delta_0> = (-i)^n J_n(2t)
    for (Index n = -150; n <= 150; ++n)
        CHECK(std::abs(std::abs(wp.amplitudes(h.row(n))) - std::abs(boost::math::cyl_bessel_j(n, 120.0))) < 1e-12);
    CHECK(wp.norm_error < 1e-12);
    CHECK(wp.leakage < 1e-10);
}

TEST_CASE("eigensystem of the lattice operator") {
    const auto h = LatticeOperator::centered(make_model("fibonacci", 2.0), 100);
    const auto& es = h.eigensystem();
    for (Eigen::Index j = 0; j < es.values.size(); j += 17) {
        const Eigen::VectorXcd v = es.vectors.col(j).cast<std::complex<double>>();
        CHECK((h.apply(v) - es.values(j) * v).norm() < 1e-10);
    }
    CHECK(es.values.maxCoeff() <= h.spectral_bound());
}

TEST_CASE("Abelian averages are a probability distribution") {
    const auto h = LatticeOperator::centered(make_model("golden_sturmian", 3.0), 300);
    const auto rep = abelian_moments(h, delta(h, 0), {5, 20, 80}, {1, 2});
    for (std::size_t j = 0; j < rep.T.size(); ++j) {
        CHECK(rep.normalization_error[j] < 1e-8);
        CHECK(rep.min_weight[j] > -1e-12);
    }
    // complex initial state takes the general branch
    WaveVector psi = delta(h, 0) + std::complex<double>(0, 1) * delta(h, 1);
    psi /= psi.norm();
    const auto rc = abelian_moments(h, psi, {5, 20}, {2});
    CHECK(rc.normalization_error[1] < 1e-8);
}

TEST_CASE("Abelian average against time quadrature") {
    const auto h = LatticeOperator::centered(make_model("thue_morse", 1.0), 200);
    const double T = 4.0;
    const auto rep = abelian_moments(h, delta(h, 0), {T}, {2});
    // (2/T) int exp(-2t/T) |psi(n,t)|^2 dt by composite Simpson on [0, 20T]
    const int steps = 4000;
    const double dt = 20 * T / steps;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(h.size());
    for (int i = 0; i <= steps; ++i) {
        const double t = i * dt;
        const double w = (i == 0 || i == steps) ? 1 : (i % 2 ? 4 : 2);
        acc += w * std::exp(-2 * t / T) * evolve(h, delta(h, 0), t).amplitudes.cwiseAbs2();
    }
    acc *= (2 / T) * dt / 3;
    for (Index n : {0, 1, 3, 7}) CHECK(rep.weight(n, 0) == doctest::Approx(acc(h.row(n))).epsilon(1e-6));
}

TEST_CASE("ballistic transport in the free case") {
    const auto h = LatticeOperator::centered(Model::free(), 600);
    const auto rep = abelian_moments(h, delta(h, 0), log_space(2, 80, 7), {2});
    const auto ex = transport_exponents(rep, 2);
    CHECK(ex.beta_minus >= 0.95);
    CHECK(rep.usable());
    CHECK_THROWS_AS(transport_exponents(abelian_moments(h, delta(h, 0), log_space(2, 10, 7), {2}), 2),
                    InsufficientSpan);
}

TEST_CASE("resolvent row") {
    const auto h = LatticeOperator::centered(make_model("fibonacci", 2.0), 300);
    const auto r = resolvent_row(h, {0.4, 0.5});
    CHECK(r.residual < 1e-8);
    CHECK(r.edge_ratio < 1e-6);
    CHECK_THROWS_AS(resolvent_row(LatticeOperator::centered(Model::free(), 20), {0.4, 0.01}), EdgeDecayError);
    CHECK_THROWS_AS(resolvent_row(h, {0.4, 0.0}), InvalidArgument);
}

TEST_CASE("Plancherel identity on a small lattice") {
    const auto h = LatticeOperator::centered(make_model("golden_sturmian", 2.0), 256);
    for (Index n : {0, 3}) {
        const auto r = plancherel_check(h, delta(h, 0), n, 20.0);
        CHECK(r.relative_discrepancy < 1e-5);
        CHECK(r.spot_check < 1e-8);
    }
}

TEST_CASE("lower bound formulas") {
    CHECK(transport_lower_bound(1.0, 100.0) == doctest::Approx(1.0 / 3 - 9.0 / 300));
    CHECK(transport_lower_bound_sturmian(1.0, 1.0, 0.0) == doctest::Approx(1.0 / 3));
    CHECK(transport_lower_bound_sturmian(1.0, 10.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(transport_lower_bound(0.0, 1.0), InvalidArgument);
}

TEST_CASE("upper-bound integrals shrink with T for strong coupling") {
    const auto m = make_model("golden_sturmian", 8.0);
    const auto a = upper_bound_integrals(m, 100.0, 1.0, 1.0, 2001);
    const auto b = upper_bound_integrals(m, 1000.0, 1.0, 1.0, 2001);
    CHECK(b.right < a.right);
    CHECK(a.escaped_fraction > 0.5);
    const auto f = upper_bound_integrals(Model::free(), 100.0, 1.0, 1.0, 2001);
    CHECK(f.right > a.right);
}
