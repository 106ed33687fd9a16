#pragma once

// Trace maps for Sturmian potentials V(n) = lambda * s_n.
//
// Fibonacci:  x_{-1} = 1, x_0 = E/2, x_1 = (E - lambda)/2,
//             x_{k+2} = 2 x_{k+1} x_k - x_{k-1},
// with x_{k+1}^2 + x_k^2 + x_{k-1}^2 - 2 x_{k+1} x_k x_{k-1} = 1 + lambda^2/4.
//
// General coefficients:  M_{-1} = [[1, -lambda], [0, 1]], M_0 = [[E, -1], [1, 0]],
//             M_{k+1} = M_{k-1} M_k^{a_{k+1}},  x_k = Tr(M_k)/2.
// M_k is the transfer matrix over the standard word w_k.

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "qcspec/continued_fraction.hpp"
#include "qcspec/interval_set.hpp"

namespace qcs {

/// value = mantissa * 2^exponent.  Used once |x| leaves the double range of
/// comfortable arithmetic (about 1e100).
template <class Scalar>
struct ScaledValue {
    Scalar mantissa{};
    std::int64_t exponent = 0;

    double log_abs() const;
    bool scaled() const { return exponent != 0; }
    /// The plain value; may overflow to inf.
    Scalar value() const;
};

template <class Scalar>
struct TraceOrbit {
    double lambda = 0;
    Scalar energy{};
    /// x_{-1}, x_0, ..., x_K  (x(k) is values[k + 1]).
    std::vector<ScaledValue<Scalar>> values;
    /// Invariant evaluated at each k = 0..K-1 from (x_{k+1}, x_k, x_{k-1});
    /// NaN once values are scaled.
    std::vector<double> invariant;
    /// Set when the computation stopped before k_max because the exponent
    /// range was exhausted; the orbit had escaped by then.
    bool halted = false;

    int k_max() const { return static_cast<int>(values.size()) - 2; }
    Scalar x(int k) const { return values.at(static_cast<std::size_t>(k + 1)).value(); }
    double log_abs(int k) const { return values.at(static_cast<std::size_t>(k + 1)).log_abs(); }
    double expected_invariant() const { return 1 + lambda * lambda / 4; }
};

using RealOrbit = TraceOrbit<double>;
using ComplexOrbit = TraceOrbit<std::complex<double>>;

template <class Scalar>
TraceOrbit<Scalar> fib_orbit(double lambda, Scalar energy, int k_max);

struct EscapeReport {
    enum class Kind { BoundedSoFar, Escaped } kind = Kind::BoundedSoFar;
    int k0 = -1;                  // escape index when escaped
    bool unique = true;           // no other k satisfies the escape condition
    bool super_growth = true;     // |x_{k+2}| > |x_{k+1} x_k| for all k >= k0
    double growth_constant = 0;   // C = min_{k >= k0} |x_k|^{1/F_{k-k0}}, F_0 = F_1 = 1
    bool bound_holds = true;      // |x_k| <= 1 + lambda/2 for all k (bounded orbits)
    double max_abs = 0;           // max |x_k| over the orbit (bounded orbits)
    /// The three-term condition is only established for the golden mean; set
    /// when it was applied to other coefficients as a working assumption.
    bool assumed_condition = false;
};

/// Escape condition: |x_{k0-1}| <= 1 < |x_{k0}|, |x_{k0+1}|.
EscapeReport escape_classify(const RealOrbit& orbit);

template <class Scalar>
struct SturmianOrbit;
/// Same test on the traces of a general Sturmian orbit (assumed_condition set).
EscapeReport escape_classify(const SturmianOrbit<double>& orbit);
/// |x_k| <= 1 + lambda/2 for every k <= k_max.
bool b_infty_member(double lambda, double energy, int k_max);

// ---------------------------------------------------------------------------

template <class Scalar>
struct ScaledMatrix {
    Eigen::Matrix<Scalar, 2, 2> mantissa;
    std::int64_t exponent = 0;
    Scalar half_trace() const;
};

template <class Scalar>
struct SturmianOrbit {
    double lambda = 0;
    Scalar energy{};
    std::vector<std::int64_t> a;                 // a_1..a_K
    std::vector<ScaledMatrix<Scalar>> matrices;  // M_{-1}, M_0, ..., M_K
    std::vector<ScaledValue<Scalar>> values;     // x_{-1}, ..., x_K
    /// z_k = Tr(M_{k-1} M_k)/2 for k = 0..K.
    std::vector<ScaledValue<Scalar>> cross;
    /// x_{k-1}^2 + x_k^2 + z_k^2 - 2 x_{k-1} x_k z_k for k = 0..K (NaN once scaled).
    /// For a_k = 1 this is the Fibonacci invariant since then z_k = x_{k+1}.
    std::vector<double> invariant;

    int k_max() const { return static_cast<int>(values.size()) - 2; }
    Scalar x(int k) const { return values.at(static_cast<std::size_t>(k + 1)).value(); }
    double log_abs(int k) const { return values.at(static_cast<std::size_t>(k + 1)).log_abs(); }
};

/// M_k^a via Cayley-Hamilton: M^a = P_a M - det(M) P_{a-1} I, P_0 = 0, P_1 = 1,
/// P_{n+1} = Tr(M) P_n - det(M) P_{n-1}  (Chebyshev polynomials of the second kind
/// in Tr M / 2 when det M = 1).
template <class Scalar>
ScaledMatrix<Scalar> matrix_power(const ScaledMatrix<Scalar>& m, std::int64_t a);

template <class Scalar>
SturmianOrbit<Scalar> sturmian_orbit(double lambda, const ContinuedFraction& cf, Scalar energy, int k_max);

// ---------------------------------------------------------------------------

struct BandSet {
    int k = 0;
    IntervalSet bands;
    int band_count = 0;        // before merging touching bands
    int certified_edges = 0;   // edges with a verified sign change of |x_k| - 1
    int max_bands = 0;         // q_k
};

/// sigma_k = {E : |x_k(E)| <= 1} for the golden-mean (Fibonacci) model.
/// Band edges are the periodic / antiperiodic eigenvalues of the q_k-periodic
/// operator, refined by bisection on |x_k| - 1 to `resolution`.
BandSet sigma_k(double lambda, int k, double resolution = 1e-13);
/// Same for the Sturmian model with coefficients cf (needs k <= depth).
BandSet sigma_k(double lambda, const ContinuedFraction& cf, int k, double resolution = 1e-13);

/// Half trace x_k(E) of the Sturmian model (Fibonacci recursion for a = 1).
double half_trace(double lambda, const ContinuedFraction& cf, int k, double energy);

/// First k >= 0 with |x_k(z)| > 1 and |x_{k+1}(z)| > 1 (z outside two
/// consecutive complex band sets); nullopt if none up to k_max.
std::optional<int> complex_escape_time(double lambda, std::complex<double> z, int k_max);

// ---------------------------------------------------------------------------

/// Invariant audit in multiprecision: the orbit is recomputed with MPFR at a
/// precision large enough that |I_k - (1 + lambda^2/4)| is resolved far below
/// 1e-9 even when x_k is astronomically large.
struct InvariantAudit {
    double max_deviation = 0;  // max_k |I_k - (1 + lambda^2/4)|, k = 0..k_max-1
    long precision_bits = 0;
    double max_log2_abs = 0;   // largest log2 |x_k|
};

InvariantAudit audit_fib_invariant(double lambda, double energy, int k_max);

}  // namespace qcs
