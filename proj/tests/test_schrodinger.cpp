#include "doctest.h"

#include <cmath>
#include <random>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "qcspec/model.hpp"
#include "qcspec/schrodinger.hpp"

using namespace qcs;

namespace {

Potential random_potential(std::mt19937_64& rng, Index first, Index last, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Potential v{first, {}};
    for (Index n = first; n < last; ++n) v.values.push_back(u(rng));
    return v;
}

}  // namespace

TEST_CASE("transfer products against explicit multiplication") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Potential v = random_potential(rng, -10, 30, 3.0);
        const double E = std::uniform_real_distribution<double>(-4, 4)(rng);
        Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
        for (Index n = -10; n < 30; ++n) {
            Eigen::Matrix2d t;
            t << E - v(n), -1, 1, 0;
            m = t * m;
        }
        const auto p = transfer_product(v, E, -10, 30);
        const Eigen::Matrix2d got = p.value();
        CHECK((got - m).cwiseAbs().maxCoeff() <= 1e-9 * m.cwiseAbs().maxCoeff());
        CHECK(std::abs(got.determinant() - 1) < 1e-6 * std::max(1.0, m.squaredNorm()));
    }
}

TEST_CASE("propagation is invertible") {
    std::mt19937_64 rng(9);
    const Potential v = random_potential(rng, -50, 50, 2.0);
    const Vector2<double> u0(0.3, -1.2);
    const auto fwd = propagate(v, 0.7, u0, -20, 25);
    const auto back = propagate(v, 0.7, fwd, 25, -20);
    CHECK((back - u0).norm() < 1e-8);
}

TEST_CASE("free transfer matrices are Chebyshev") {
    const Potential v = Potential::constant(0, 200, 0.0);
    for (double k : {0.3, 1.1, 2.5}) {
        const double E = 2 * std::cos(k);
        for (Index n : {1, 7, 50, 199}) {
            const auto p = transfer_product(v, E, 0, n);
            CHECK(p.half_trace() == doctest::Approx(std::cos(n * k)).epsilon(1e-9));
        }
    }
}

TEST_CASE("closed-form 2x2 norm") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    for (int i = 0; i < 200; ++i) {
        Matrix2<double> a;
        a << g(rng), g(rng), g(rng), g(rng);
        const double want = Eigen::JacobiSVD<Eigen::Matrix2d>(a).singularValues()(0);
        CHECK(spectral_norm(a) == doctest::Approx(want).epsilon(1e-12));
        Matrix2<Complex> c;
        c << Complex(g(rng), g(rng)), Complex(g(rng), g(rng)), Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
        const double wc = Eigen::JacobiSVD<Eigen::Matrix2cd>(c).singularValues()(0);
        CHECK(spectral_norm(c) == doctest::Approx(wc).epsilon(1e-12));
    }
}

TEST_CASE("solutions satisfy the difference equation") {
    std::mt19937_64 rng(4);
    const Potential v = random_potential(rng, 0, 200, 1.0);
    const double E = 0.4;
    const auto s = solve_equation(v, E, Vector2<double>(1.0, 0.0), 0, 150);
    for (Index n = 1; n < 149; ++n) {
        const double r = s.u(n + 1) + s.u(n - 1) + (v(n) - E) * s.u(n);
        CHECK(std::abs(r) <= 1e-9 * (std::abs(s.u(n + 1)) + std::abs(s.u(n)) + std::abs(s.u(n - 1))));
    }
}

TEST_CASE("locally constant sampling") {
    const Window w = Window::from_string("0110100110", -3);
    const auto f = SamplingFunction::from_strings(1, 0, {{"00", 1.0}, {"01", 2.0}, {"10", 3.0}, {"11", 4.0}},
                                                   w.alphabet);
    const Potential v = potential_from_sampling(w, f, -2, 7);
    CHECK(v(-2) == 2.0);  // w[-3] w[-2] = 01
    CHECK(v(-1) == 4.0);  // 11
    CHECK(v(0) == 3.0);   // 10
    CHECK_THROWS_AS(potential_from_sampling(w, f, -3, 7), InvalidArgument);
}

TEST_CASE("two-block Gordon bound on random repetitions") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> pd(1, 40);
    std::uniform_real_distribution<double> ed(-5, 5), ang(0, 2 * 3.141592653589793);
    for (int i = 0; i < 2000; ++i) {
        const int p = pd(rng);
        Potential base = random_potential(rng, 0, p, 3.0);
        Potential v{0, {}};
        for (int r = 0; r < 2; ++r) v.values.insert(v.values.end(), base.values.begin(), base.values.end());
        const double a = ang(rng);
        const auto rec = gordon_two_block(v, p, ed(rng), Vector2<double>(std::cos(a), std::sin(a)));
        CHECK(rec.satisfied);
    }
}

TEST_CASE("square periods of a periodic potential") {
    const Model m = Model::periodic({0, 1, 1}, 1.0);
    const auto sq = find_square_periods(m.potential(-40, 40), 12);
    CHECK(sq.three_block == std::vector<int>{3, 6, 9, 12});
    Potential broken = m.potential(-40, 40);
    broken.values[45] += 1;  // site 5
    CHECK_THROWS_AS(gordon_two_block(broken, 3, 0.1, Vector2<double>(1, 0)), RepetitionError);
}
