#include "qcspec/dynamics.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qcspec/fit.hpp"
#include "qcspec/parallel.hpp"
#include "qcspec/tracemap.hpp"

namespace qcs {

WaveVector delta(const LatticeOperator& h, Index n) {
    WaveVector v = WaveVector::Zero(h.size());
    v(h.row(n)) = 1.0;
    return v;
}

Index lattice_half_width(const LatticeOperator& h) {
    if (!h.contains(0)) throw InvalidArgument("lattice does not contain the origin");
    return std::min(-h.first(), h.last());
}

double edge_mass(const LatticeOperator& h, const Eigen::VectorXd& weights) {
    const double cut = 0.9 * static_cast<double>(lattice_half_width(h));
    double s = 0;
    for (Index i = 0; i < h.size(); ++i) {
        const Index n = h.first() + i;
        if (std::abs(static_cast<double>(n)) > cut) s += weights(i);
    }
    return s;
}

namespace {

void check_state(const LatticeOperator& h, const WaveVector& psi0) {
    if (psi0.size() != h.size()) throw InvalidArgument("initial state does not match the lattice size");
    if (!psi0.allFinite()) throw InvalidArgument("initial state must be finite");
}

}  // namespace

WavePacket evolve(const LatticeOperator& h, const WaveVector& psi0, double t) {
    check_state(h, psi0);
    const auto& es = h.eigensystem();
    const Eigen::VectorXcd c = es.vectors.transpose().cast<std::complex<double>>() * psi0;
    Eigen::VectorXcd phased(c.size());
    for (Eigen::Index j = 0; j < c.size(); ++j) phased(j) = std::polar(1.0, -es.values(j) * t) * c(j);
    WavePacket out;
    out.t = t;
    out.amplitudes = es.vectors.cast<std::complex<double>>() * phased;
    out.norm_error = std::abs(out.amplitudes.norm() - psi0.norm());
    out.leakage = edge_mass(h, out.amplitudes.cwiseAbs2());
    out.leakage_warning = out.leakage > 0.01;
    return out;
}

// ---------------------------------------------------------------------------

bool TransportReport::usable() const {
    return std::all_of(leakage.begin(), leakage.end(), [](double x) { return x <= 0.01; });
}

TransportReport abelian_moments(const LatticeOperator& h, const WaveVector& psi0, const std::vector<double>& T_grid,
                                const std::vector<double>& p_set) {
    check_state(h, psi0);
    if (T_grid.empty()) throw InvalidArgument("empty T grid");
    for (double T : T_grid)
        if (!(T > 0) || !std::isfinite(T)) throw InvalidArgument("T values must be positive");
    for (double p : p_set)
        if (!(p > 0)) throw InvalidArgument("moment orders must be positive");
    const auto& es = h.eigensystem();
    const Index N = h.size();
    const Eigen::VectorXcd c = es.vectors.transpose().cast<std::complex<double>>() * psi0;
    const double cmax = c.cwiseAbs().maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < c.size(); ++j)
        if (std::abs(c(j)) >= 1e-14 * cmax && cmax > 0) keep.push_back(j);
    const auto M = static_cast<Eigen::Index>(keep.size());
    const bool real = c.imag().cwiseAbs().maxCoeff() == 0.0;

    Eigen::VectorXd e(M);
    Eigen::MatrixXd ur;   // phi_j(n) c_j, real case
    Eigen::MatrixXcd uc;  // complex case
    if (real) ur.resize(N, M); else uc.resize(N, M);
    for (Eigen::Index k = 0; k < M; ++k) {
        const auto j = keep[static_cast<std::size_t>(k)];
        e(k) = es.values(j);
        if (real) ur.col(k) = es.vectors.col(j) * c(j).real();
        else uc.col(k) = es.vectors.col(j).cast<std::complex<double>>() * c(j);
    }

    TransportReport out;
    out.first = h.first();
    out.T = T_grid;
    out.p = p_set;
    out.eigenpairs_used = static_cast<int>(M);
    out.a.resize(N, static_cast<Eigen::Index>(T_grid.size()));
    const double norm2 = psi0.squaredNorm();
    for (std::size_t t = 0; t < T_grid.size(); ++t) {
        const double g = 2.0 / T_grid[t];
        Eigen::VectorXd a(N);
        if (real) {
            Eigen::MatrixXd K(M, M);
            for (Eigen::Index l = 0; l < M; ++l)
                for (Eigen::Index j = 0; j < M; ++j) {
                    const double d = e(j) - e(l);
                    K(j, l) = g * g / (g * g + d * d);
                }
            const Eigen::MatrixXd B = ur * K;
            a = ur.cwiseProduct(B).rowwise().sum();
        } else {
            Eigen::MatrixXcd K(M, M);
            for (Eigen::Index l = 0; l < M; ++l)
                for (Eigen::Index j = 0; j < M; ++j) K(j, l) = g / std::complex<double>(g, e(j) - e(l));
            const Eigen::MatrixXcd B = uc.conjugate() * K.transpose();
            a = uc.cwiseProduct(B).rowwise().sum().real();
        }
        out.a.col(static_cast<Eigen::Index>(t)) = a;
        out.normalization_error.push_back(std::abs(a.sum() - norm2));
        out.min_weight.push_back(a.minCoeff());
        out.leakage.push_back(edge_mass(h, a.cwiseMax(0.0)));
    }
    out.moments.assign(p_set.size(), std::vector<double>(T_grid.size(), 0.0));
    for (std::size_t i = 0; i < p_set.size(); ++i) {
        for (std::size_t t = 0; t < T_grid.size(); ++t) {
            double s = 0;
            for (Index r = 0; r < N; ++r) {
                const double n = std::abs(static_cast<double>(h.first() + r));
                if (n > 0) s += std::pow(n, p_set[i]) * out.a(r, static_cast<Eigen::Index>(t));
            }
            out.moments[i][t] = s;
        }
    }
    return out;
}

TransportExponents transport_exponents(const TransportReport& report, double p, int width) {
    const auto it = std::find(report.p.begin(), report.p.end(), p);
    if (it == report.p.end()) throw InvalidArgument("moment order not in the report");
    const std::size_t m = report.T.size();
    if (m < 5) throw InsufficientSpan("transport exponents need at least 5 T values");
    const auto [lo, hi] = std::minmax_element(report.T.begin(), report.T.end());
    if (std::log10(*hi / *lo) < 1.5 - 1e-12) throw InsufficientSpan("T grid must span at least 1.5 decades");
    const auto& mom = report.moments[static_cast<std::size_t>(it - report.p.begin())];
    std::vector<double> x, y;
    for (std::size_t t = 0; t < m; ++t) {
        if (!(mom[t] > 0)) throw Error("moment vanishes at T = " + std::to_string(report.T[t]));
        x.push_back(std::log(report.T[t]));
        y.push_back(std::log(mom[t]) / p);
    }
    if (width <= 0) width = std::max(3, static_cast<int>(m) / 2);
    if (width > static_cast<int>(m)) throw InvalidArgument("window wider than the T grid");
    const auto w = windowed_slopes(x, y, width, true);
    const auto fit = least_squares(x, y);
    TransportExponents out;
    out.p = p;
    out.beta_minus = w.min;
    out.beta_plus = w.max;
    out.beta = fit.slope;
    out.residual = fit.residual;
    out.slopes = w.slopes;
    return out;
}

ExponentTable transport_table(const TransportReport& report, int width, double tol) {
    ExponentTable out;
    out.tol = tol;
    std::vector<double> ps = report.p;
    std::sort(ps.begin(), ps.end());
    for (double p : ps) out.rows.push_back(transport_exponents(report, p, width));
    for (std::size_t i = 1; i < out.rows.size(); ++i) {
        if (out.rows[i].beta_minus < out.rows[i - 1].beta_minus - tol) out.monotone = false;
        if (out.rows[i].beta_plus < out.rows[i - 1].beta_plus - tol) out.monotone = false;
    }
    return out;
}

// ---------------------------------------------------------------------------

Eigen::VectorXcd resolvent_apply(const LatticeOperator& h, std::complex<double> z, const Eigen::VectorXcd& psi) {
    if (z.imag() == 0.0) throw InvalidArgument("resolvent needs Im z != 0");
    const auto n = static_cast<lapack_int>(h.size());
    if (psi.size() != n) throw InvalidArgument("vector does not match the lattice size");
    std::vector<lapack_complex_double> dl(static_cast<std::size_t>(std::max(n - 1, 0)), {1.0, 0.0});
    std::vector<lapack_complex_double> du = dl;
    std::vector<lapack_complex_double> d(static_cast<std::size_t>(n));
    for (lapack_int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = h.diagonal()[static_cast<std::size_t>(i)] - z;
    Eigen::VectorXcd b = psi;
    const lapack_int info = LAPACKE_zgtsv(LAPACK_COL_MAJOR, n, 1, dl.data(), d.data(), du.data(),
                                          reinterpret_cast<lapack_complex_double*>(b.data()), n);
    if (info != 0) throw Error("tridiagonal solve failed (info " + std::to_string(info) + ")");
    return b;
}

ResolventRow resolvent_row(const LatticeOperator& h, std::complex<double> z, double edge_tol) {
    if (!h.contains(0)) throw InvalidArgument("lattice does not contain the origin");
    ResolventRow out;
    out.z = z;
    out.first = h.first();
    out.u = resolvent_apply(h, z, delta(h, 0));
    const Eigen::VectorXcd r = h.apply(out.u) - z * out.u;
    const Index origin = h.row(0);
    for (Index i = 0; i < h.size(); ++i)
        if (i != origin) out.residual = std::max(out.residual, std::abs(r(i)));
    if (h.size() > 1) {
        const double u0 = std::abs(out.u(origin));
        out.edge_ratio = std::max(std::abs(out.u(0)), std::abs(out.u(h.size() - 1))) / u0;
        if (out.edge_ratio > edge_tol) {
            throw EdgeDecayError(out.edge_ratio, 2 * std::max<Index>(1, std::max(-h.first(), h.last())));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

PlancherelReport plancherel_check(const LatticeOperator& h, const WaveVector& psi0, Index n, double T) {
    check_state(h, psi0);
    if (!(T > 0)) throw InvalidArgument("T must be positive");
    const auto& es = h.eigensystem();
    const Index row = h.row(n);
    const Eigen::VectorXcd c = es.vectors.transpose().cast<std::complex<double>>() * psi0;
    // w_j = c_j phi_j(n)
    std::vector<double> e;
    std::vector<std::complex<double>> w;
    double wmax = 0;
    for (Eigen::Index j = 0; j < c.size(); ++j) wmax = std::max(wmax, std::abs(c(j) * es.vectors(row, j)));
    for (Eigen::Index j = 0; j < c.size(); ++j) {
        const auto wj = c(j) * es.vectors(row, j);
        if (std::abs(wj) > 1e-15 * wmax) {
            e.push_back(es.values(j));
            w.push_back(wj);
        }
    }
    const double eta = 1.0 / T;
    const double g = 2.0 / T;

    PlancherelReport out;
    out.n = n;
    out.T = T;
    {
        double a = 0;
        for (std::size_t j = 0; j < e.size(); ++j)
            for (std::size_t l = 0; l < e.size(); ++l)
                a += (g / std::complex<double>(g, e[j] - e[l]) * w[j] * std::conj(w[l])).real();
        out.lhs = std::numbers::pi * T * a;
    }
    if (e.empty()) {
        out.rhs = 0;
        out.relative_discrepancy = out.lhs == 0 ? 0 : 1;
        return out;
    }

    auto f = [&](double E) {
        std::complex<double> s = 0;
        for (std::size_t j = 0; j < e.size(); ++j) s += w[j] / std::complex<double>(e[j] - E, -eta);
        return std::norm(s);
    };

    out.cutoff = h.spectral_bound() + 10.0 / T;
    std::vector<double> cuts{-out.cutoff};
    for (double x : e) {
        if (x - cuts.back() > 1e-3 * eta) cuts.push_back(x);
    }
    if (out.cutoff - cuts.back() > 1e-3 * eta) cuts.push_back(out.cutoff);
    else cuts.back() = out.cutoff;

    using boost::math::quadrature::gauss_kronrod;
    // rough pass first so each piece gets a tolerance relative to the whole
    // integral; a per-piece relative tolerance chases noise where f is tiny
    std::vector<double> rough(cuts.size() - 1);
    double scale = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        rough[i] = gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 0, 0.0);
        scale += std::abs(rough[i]);
    }
    double total = 0, err_total = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double tol = std::clamp(1e-11 * scale / std::max(std::abs(rough[i]), 1e-300), 1e-12, 1e-2);
        double err = 0;
        total += gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 15, tol, &err);
        err_total += err;
    }
    boost::math::quadrature::exp_sinh<double> tail;
    for (double sign : {1.0, -1.0}) {
        double err = 0;
        total += tail.integrate([&](double x) { return f(sign * (out.cutoff + x)); }, 1e-12, &err);
        err_total += err;
    }
    out.rhs = total;
    out.quadrature_error = err_total;
    if (!std::isfinite(total) || err_total > 1e-7 * std::abs(total) + 1e-300)
        throw QuadratureFailure("Plancherel quadrature did not converge (error estimate " +
                                std::to_string(err_total) + ")");
    out.relative_discrepancy = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.lhs), 1e-300);

    // the eigen-sum integrand against a direct solve at a few energies
    for (int i = 0; i < 5; ++i) {
        const double E = -out.cutoff + (2 * i + 1) * out.cutoff / 5.0;
        const auto u = resolvent_apply(h, {E, eta}, psi0);
        const double direct = std::norm(u(row));
        out.spot_check = std::max(out.spot_check, std::abs(direct - f(E)) / std::max(direct, 1e-300));
    }
    return out;
}

// ---------------------------------------------------------------------------

double transport_lower_bound(double alpha, double p) {
    if (!(alpha > 0) || !(p > 0)) throw InvalidArgument("alpha and p must be positive");
    return 1.0 / (1.0 + 2.0 * alpha) - (1.0 + 8.0 * alpha) / (p + 2.0 * alpha * p);
}

double transport_lower_bound_sturmian(double alpha, double p, double kappa) {
    if (!(alpha > 0) || !(p > 0)) throw InvalidArgument("alpha and p must be positive");
    if (p <= 2 * alpha + 1) return (p + 2 * kappa) / ((p + 1) * (alpha + kappa + 0.5));
    return 1.0 / (alpha + 1.0);
}

namespace {

// max over 1 <= n <= n_max of log ||A||, A over [0, n) (right) or [-n, 0) (left)
double max_log_norm(const Potential& v, std::complex<double> z, Index n_max, bool left) {
    Matrix2<std::complex<double>> m = Matrix2<std::complex<double>>::Identity();
    double scale = 0, best = -INFINITY;
    for (Index k = 0; k < n_max; ++k) {
        const Index site = left ? -1 - k : k;
        const auto t = one_step<std::complex<double>>(v(site), z);
        m = left ? Matrix2<std::complex<double>>(m * t) : Matrix2<std::complex<double>>(t * m);
        const double nm = spectral_norm(m);
        best = std::max(best, scale + std::log(nm));
        if (nm > 1e100 || nm < 1e-100) {
            m /= nm;
            scale += std::log(nm);
        }
    }
    return best;
}

double trapezoid(const std::vector<double>& y, double h) {
    double s = 0;
    for (std::size_t i = 0; i < y.size(); ++i) s += (i == 0 || i + 1 == y.size() ? 0.5 : 1.0) * y[i];
    return s * h;
}

}  // namespace

UpperBoundIntegrals upper_bound_integrals(const Model& model, double T, double alpha, double C, int grid_points) {
    if (!(T > 0) || !(alpha > 0) || !(C > 0)) throw InvalidArgument("T, alpha and C must be positive");
    UpperBoundIntegrals out;
    out.T = T;
    out.K = std::max(4.0, model.sup_bound() + 3.0);
    out.n_max = std::max<Index>(1, static_cast<Index>(std::floor(C * std::pow(T, alpha))));
    if (grid_points <= 0) {
        const double want = 2 * out.K * 8 * T + 1;
        grid_points = static_cast<int>(std::clamp(want, 1001.0, 131073.0));
    }
    if (grid_points < 3) throw InvalidArgument("need at least 3 grid points");
    out.grid_points = grid_points;
    const Potential v = model.potential(-out.n_max, out.n_max);
    const double h = 2 * out.K / (grid_points - 1);

    // golden-mean Sturmian at phase 0: sites 1..q_k carry w_k
    const auto cf = model.cf_pattern();
    const bool golden = model.kind == Model::Kind::Sturmian && cf && *cf == std::vector<std::int64_t>{1} &&
                        model.preset->sturmian->phi == 0.0;
    int k_top = -1;
    if (golden) {
        const auto frac = ContinuedFraction::periodic({1}, 90);
        while (k_top + 2 <= frac.depth() && frac.q(k_top + 2) + 1 <= out.n_max) ++k_top;
    }
    const double lambda = golden ? model.lambda * (model.symbol_values[1] - model.symbol_values[0]) : 0.0;

    std::vector<double> right(static_cast<std::size_t>(grid_points)), left(right.size()), trace(right.size());
    std::vector<int> escaped(right.size(), 0);
    parallel_for(right.size(), [&](std::size_t i) {
        const std::complex<double> z(-out.K + static_cast<double>(i) * h, 1.0 / T);
        right[i] = std::exp(-2 * max_log_norm(v, z, out.n_max, false));
        left[i] = std::exp(-2 * max_log_norm(v, z, out.n_max, true));
        if (golden && k_top >= 0) {
            // ||A_{q_k + 1}|| >= ||M_k|| / ||T_0|| >= |x_k| / ||T_0||
            const auto orbit = fib_orbit<std::complex<double>>(lambda, z, k_top);
            double best = 0;
            for (int k = 0; k <= k_top; ++k) best = std::max(best, orbit.log_abs(k));
            const double t0 = std::log(spectral_norm(one_step<std::complex<double>>(v(0), z)));
            trace[i] = std::min(1.0, std::exp(-2 * (best - t0)));
            escaped[i] = complex_escape_time(lambda, z, std::max(0, k_top - 1)).has_value() ? 1 : 0;
        }
    });
    out.right = trapezoid(right, h);
    out.left = trapezoid(left, h);
    if (golden && k_top >= 0) {
        out.right_trace_bound = trapezoid(trace, h);
        out.escaped_fraction = static_cast<double>(std::count(escaped.begin(), escaped.end(), 1)) / grid_points;
    } else {
        out.right_trace_bound = NAN;
        out.escaped_fraction = NAN;
    }
    return out;
}

}  // namespace qcs
