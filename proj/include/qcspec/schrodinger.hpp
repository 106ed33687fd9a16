#pragma once

// Discrete Schroedinger operators  (H u)(n) = u(n+1) + u(n-1) + V(n) u(n)
// and their transfer matrices.
//
// The one-step matrix T_n(E) = [[E - V(n), -1], [1, 0]] maps
// U(n) = (u(n), u(n-1)) to U(n+1).  Ranges are half open: the product over
// [a, b) is T_{b-1} ... T_a and maps U(a) to U(b).

#include <complex>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "qcspec/words.hpp"

namespace qcs {

using Complex = std::complex<double>;

template <class Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
template <class Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

/// Locally constant sampling: V(n) = h(w[n-M] ... w[n+N]).
struct SamplingFunction {
    int M = 0;
    int N = 0;
    std::map<Word, double> table;

    /// M = N = 0 with h(symbol s) = values[s].
    static SamplingFunction symbolwise(const std::vector<double>& values);
    /// Table keyed by strings of single-character labels.
    static SamplingFunction from_strings(int M, int N, const std::map<std::string, double>& table,
                                         const Alphabet& alphabet);
    double operator()(const Window& w, Index n) const;
};

struct Potential {
    Index start = 0;
    std::vector<double> values;

    Index end() const { return start + static_cast<Index>(values.size()); }
    bool covers(Index first, Index last) const { return first >= start && last <= end(); }
    double operator()(Index n) const;
    double sup_norm() const;
    std::vector<double> value_set() const;

    static Potential constant(Index first, Index last, double v);
};

/// V(n) for first <= n < last; the window must cover [first - M, last + N).
Potential potential_from_sampling(const Window& w, const SamplingFunction& f, Index first, Index last);

/// 2x2 spectral norm in closed form.
template <class Scalar>
double spectral_norm(const Matrix2<Scalar>& a);

template <class Scalar>
Matrix2<Scalar> one_step(double v, Scalar energy);

/// Product with a running log-scale: the true product is matrix * exp(log_scale).
template <class Scalar>
struct TransferProduct {
    Index first = 0, last = 0;
    Matrix2<Scalar> matrix = Matrix2<Scalar>::Identity();
    double log_scale = 0;
    /// log ||A_[first, first+j)|| for j = 1..last-first when recorded.
    std::vector<double> prefix_log_norms;
    /// |det - 1| relative to max(1, ||A||^2).
    double det_error = 0;
    bool det_certified = true;

    double log_norm() const;
    double norm() const;
    /// The product itself; entries overflow to inf when log_scale is large.
    Matrix2<Scalar> value() const;
    Scalar half_trace() const;
    /// log |Tr A / 2|, usable when the trace itself overflows.
    double log_abs_half_trace() const;
};

template <class Scalar>
TransferProduct<Scalar> transfer_product(const Potential& v, Scalar energy, Index first, Index last,
                                         bool record_prefix = false);

/// U(to) from U(from), forward or backward.
template <class Scalar>
Vector2<Scalar> propagate(const Potential& v, Scalar energy, const Vector2<Scalar>& u, Index from, Index to);

// ---------------------------------------------------------------------------

template <class Scalar>
struct SolutionProfile {
    Index first = 0;  // U(first) was the initial condition
    /// u(n) for first-1 <= n <= last, stored as mantissa[i] * exp(scale[i]).
    std::vector<Scalar> mantissa;
    std::vector<double> scale;
    /// log ||U(n)|| for first <= n <= last.
    std::vector<double> log_state_norm;
    /// L and log (sum_{n=first}^{first+L-1} |u(n)|^2)^{1/2}, L = 1..last-first.
    std::vector<double> log_cumulative;

    Scalar u(Index n) const;

    // Power-law fit of the cumulative norm against L.
    double gamma1 = 0;  // smallest windowed slope
    double gamma2 = 0;  // largest windowed slope
    double gamma = 0;   // global least-squares slope
    double residual = 0;
    bool power_law = true;
    /// 2 gamma1 / (gamma1 + gamma2)
    double alpha() const { return 2 * gamma1 / (gamma1 + gamma2); }
};

/// Solves u(n+1) + u(n-1) + V(n) u(n) = E u(n) from U(first) = u0 up to U(last).
template <class Scalar>
SolutionProfile<Scalar> solve_equation(const Potential& v, Scalar energy, const Vector2<Scalar>& u0, Index first,
                                       Index last);

// ---------------------------------------------------------------------------
// Gordon-type lower bounds from local repetitions.

class RepetitionError : public Error {
public:
    explicit RepetitionError(Index m)
        : Error("repetition V(m+p) = V(m) fails at m = " + std::to_string(m)), index(m) {}
    Index index;
};

struct GordonRecord {
    int p = 0;
    double lhs = 0;
    double bound = 0;
    bool satisfied = false;
};

/// Needs V(m+p) = V(m) for 0 <= m < p.  lhs = max(||U(2p)||, ||U(p)||),
/// bound = ||U(0)|| / (2 max(|Tr A_p|, 1)).
GordonRecord gordon_two_block(const Potential& v, int p, double energy, const Vector2<double>& u0);

/// Needs V(m+p) = V(m) for -p <= m < p.  lhs = max(||U(2p)||, ||U(p)||, ||U(-p)||)
/// over ||U(0)||, bound 1/2.
GordonRecord gordon_three_block(const Potential& v, int p, double energy, const Vector2<double>& u0);

struct SquarePeriods {
    std::vector<int> two_block;    // V(m+p) = V(m), 0 <= m < p
    std::vector<int> three_block;  // V(m+p) = V(m), -p <= m < p
};

/// All p <= p_max for which the repetitions hold around the origin; only p
/// whose test range lies inside the potential are considered.
SquarePeriods find_square_periods(const Potential& v, int p_max);

/// 32 unit vectors at angles 2 pi j / 32.
std::vector<Vector2<double>> unit_circle_vectors(int count = 32);

}  // namespace qcs
