#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

#include "qcspec/common.hpp"

namespace qcs {

using BigInt = boost::multiprecision::cpp_int;

/// theta turned out to be rational before the requested depth.
class RationalTheta : public Error {
public:
    RationalTheta(BigInt p, BigInt q, int depth)
        : Error("theta is rational: " + p.str() + "/" + q.str() + " (expansion terminates at depth " +
                std::to_string(depth) + ")"),
          num(std::move(p)), den(std::move(q)), depth_reached(depth) {}
    BigInt num, den;
    int depth_reached;
};

/// Coefficients a_1..a_K with convergents p_k/q_k, k = 0..K.
///   p_0 = 0, p_1 = 1,   p_k = a_k p_{k-1} + p_{k-2}
///   q_0 = 1, q_1 = a_1, q_k = a_k q_{k-1} + q_{k-2}
class ContinuedFraction {
public:
    ContinuedFraction() = default;
    explicit ContinuedFraction(std::vector<std::int64_t> coefficients);

    /// `pattern` repeated until `depth` coefficients are available
    /// (golden mean: {1}; silver mean sqrt(2)-1: {2}).
    static ContinuedFraction periodic(const std::vector<std::int64_t>& pattern, int depth);

    int depth() const { return static_cast<int>(a_.size()); }
    /// a_k for 1 <= k <= depth().
    std::int64_t a(int k) const { return a_.at(static_cast<std::size_t>(k - 1)); }
    const std::vector<std::int64_t>& coefficients() const { return a_; }
    const BigInt& p(int k) const { return p_.at(static_cast<std::size_t>(k)); }
    const BigInt& q(int k) const { return q_.at(static_cast<std::size_t>(k)); }
    /// q_k as a machine integer; throws when it does not fit.
    Index q_index(int k) const;
    /// p_K / q_K at full depth, rounded to double.
    double value() const;

private:
    std::vector<std::int64_t> a_;
    std::vector<BigInt> p_, q_;
};

/// Expansion of theta in (0,1), where the double is taken as the exact dyadic
/// rational it represents.  Throws RationalTheta when the expansion ends before
/// `depth`; |theta - p_k/q_k| < 1/q_k^2 is verified exactly at every level.
ContinuedFraction continued_fraction(double theta, int depth);

/// num / den rounded to double.
double ratio(const BigInt& num, const BigInt& den);

/// Exact rational m / 2^e equal to a finite double.
struct Dyadic {
    BigInt mantissa;
    int exponent = 0;  // value = mantissa / 2^exponent, exponent >= 0
};
Dyadic to_dyadic(double x);

}  // namespace qcs
