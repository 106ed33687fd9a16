#pragma once

// Quantum dynamics on finite lattices: psi(t) = exp(-itH) psi0, Abelian time
// averages
//     a(n,T) = (2/T) int_0^inf exp(-2t/T) |<exp(-itH) psi0, delta_n>|^2 dt,
// moments <|X|^p>(T) = sum_n |n|^p a(n,T), transport exponents, and the
// resolvent side of
//     2 pi int_0^inf exp(-2t/T) |<exp(-itH) psi0, delta_n>|^2 dt
//       = int |<(H - E - i/T)^{-1} psi0, delta_n>|^2 dE.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qcspec/lattice.hpp"

namespace qcs {

/// Amplitudes indexed by lattice row.
using WaveVector = Eigen::VectorXcd;

/// delta_n on the lattice of H.
WaveVector delta(const LatticeOperator& h, Index n);

struct WavePacket {
    double t = 0;
    WaveVector amplitudes;
    double norm_error = 0;  // | ||psi(t)|| - ||psi0|| |
    double leakage = 0;     // probability at |n| > 0.9 L
    bool leakage_warning = false;  // leakage > 1%
};

/// Half-width L used for leakage: the largest L with [-L, L] inside the lattice.
Index lattice_half_width(const LatticeOperator& h);
/// Probability at sites with |n| > 0.9 L.
double edge_mass(const LatticeOperator& h, const Eigen::VectorXd& weights);

WavePacket evolve(const LatticeOperator& h, const WaveVector& psi0, double t);

// ---------------------------------------------------------------------------

struct TransportReport {
    Index first = 0;                 // site of row 0 of `a`
    std::vector<double> T;
    std::vector<double> p;
    Eigen::MatrixXd a;               // a(n, T_j) in column j, rows by site
    std::vector<std::vector<double>> moments;  // moments[i][j] = <|X|^p_i>(T_j)
    std::vector<double> leakage;     // per T
    std::vector<double> normalization_error;   // |sum_n a(n,T) - ||psi0||^2|
    std::vector<double> min_weight; // smallest a(n,T) per T (negative only by rounding)
    int eigenpairs_used = 0;

    /// Every T has leakage <= 1%.
    bool usable() const;
    double weight(Index n, std::size_t j) const { return a(n - first, static_cast<Eigen::Index>(j)); }
};

/// Exact Abelian averages from the eigendecomposition:
/// a(n,T) = Re sum_{j,l} g / (g + i(E_j - E_l)) c_j conj(c_l) phi_j(n) phi_l(n),
/// g = 2/T, c_j = <psi0, phi_j>.  Eigenpairs with |c_j| below 1e-14 max|c| are
/// dropped.
TransportReport abelian_moments(const LatticeOperator& h, const WaveVector& psi0, const std::vector<double>& T_grid,
                                const std::vector<double>& p_set);

struct TransportExponents {
    double p = 0;
    double beta_minus = 0;  // smallest windowed slope of log<|X|^p> / (p log T)
    double beta_plus = 0;   // largest
    double beta = 0;        // global least squares
    double residual = 0;
    std::vector<double> slopes;
};

class InsufficientSpan : public Error {
public:
    using Error::Error;
};

/// Needs >= 5 T values spanning >= 1.5 decades; width points per window
/// (0 picks half the grid, at least 3).
TransportExponents transport_exponents(const TransportReport& report, double p, int width = 0);

struct ExponentTable {
    std::vector<TransportExponents> rows;  // in increasing p
    bool monotone = true;  // beta_minus and beta_plus nondecreasing in p up to tol
    double tol = 0.02;
};

ExponentTable transport_table(const TransportReport& report, int width = 0, double tol = 0.02);

// ---------------------------------------------------------------------------

struct ResolventRow {
    std::complex<double> z;
    Index first = 0;
    Eigen::VectorXcd u;  // u(n) = <(H - z)^{-1} delta_0, delta_n>, by row
    double residual = 0; // max_{n != 0} |u(n+1) + u(n-1) + (V(n) - z) u(n)|
    double edge_ratio = 0;  // max(|u(first)|, |u(last)|) / |u(0)|

    std::complex<double> at(Index n) const { return u(n - first); }
};

class EdgeDecayError : public Error {
public:
    EdgeDecayError(double ratio, Index suggested_L)
        : Error("resolvent has not decayed at the lattice edges (ratio " + std::to_string(ratio) +
                "); enlarge the lattice, e.g. L = " + std::to_string(suggested_L)),
          edge_ratio(ratio), suggested_half_width(suggested_L) {}
    double edge_ratio;
    Index suggested_half_width;
};

/// Tridiagonal complex solve of (H - z) u = delta_0.  Throws EdgeDecayError
/// when edge_ratio > edge_tol (single-site lattices have no edge to check).
ResolventRow resolvent_row(const LatticeOperator& h, std::complex<double> z, double edge_tol = 1e-6);

/// (H - z)^{-1} psi, no checks.
Eigen::VectorXcd resolvent_apply(const LatticeOperator& h, std::complex<double> z, const Eigen::VectorXcd& psi);

// ---------------------------------------------------------------------------

struct PlancherelReport {
    Index n = 0;
    double T = 0;
    double lhs = 0;   // pi T a(n,T)
    double rhs = 0;   // int |<(H - E - i/T)^{-1} psi0, delta_n>|^2 dE
    double relative_discrepancy = 0;
    double quadrature_error = 0;  // estimated absolute error of rhs
    double cutoff = 0;            // [-cutoff, cutoff] by Gauss-Kronrod, tails by exp-sinh
    double spot_check = 0;        // relative gap, eigen-sum integrand vs direct solve, worst of 5 points
};

class QuadratureFailure : public Error {
public:
    using Error::Error;
};

PlancherelReport plancherel_check(const LatticeOperator& h, const WaveVector& psi0, Index n, double T);

// ---------------------------------------------------------------------------

/// Lower bound for beta^-(p) when the transfer matrices grow at most like
/// n^alpha: 1/(1+2 alpha) - (1+8 alpha)/(p + 2 alpha p).
double transport_lower_bound(double alpha, double p);

/// (p + 2 kappa) / ((p+1)(alpha + kappa + 1/2)) for p <= 2 alpha + 1, else 1/(alpha+1).
double transport_lower_bound_sturmian(double alpha, double p, double kappa = 0.0126);

struct UpperBoundIntegrals {
    double T = 0;
    double K = 0;
    Index n_max = 0;      // floor(C T^alpha)
    double right = 0;     // int_{-K}^{K} (max_{1<=n<=n_max} ||A_n(E + i/T)||^2)^{-1} dE
    double left = 0;      // same with -n_max <= n <= -1
    /// Trace-map version of `right` for the golden-mean model: ||A_{q_k}|| >= |x_k|
    /// bounds the integrand from above.  NaN for other models.
    double right_trace_bound = 0;
    /// Fraction of grid energies whose complex trace orbit escapes at a level
    /// k with q_{k+1} <= n_max (golden-mean model only, else NaN).
    double escaped_fraction = 0;
    int grid_points = 0;
};

/// K = max(4, sup|V| + 3); trapezoid rule on `grid_points` energies
/// (0 picks about 8 points per 1/T, capped at 2^17 + 1).
UpperBoundIntegrals upper_bound_integrals(const Model& model, double T, double alpha, double C,
                                          int grid_points = 0);

}  // namespace qcs
