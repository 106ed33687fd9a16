#include "qcspec/continued_fraction.hpp"

#include <cmath>

namespace qcs {

ContinuedFraction::ContinuedFraction(std::vector<std::int64_t> coefficients) : a_(std::move(coefficients)) {
    for (auto x : a_)
        if (x < 1) throw InvalidArgument("continued fraction coefficients must be positive");
    p_ = {BigInt(0), BigInt(1)};
    q_ = {BigInt(1)};
    if (a_.empty()) return;
    q_.push_back(BigInt(a_[0]));
    for (std::size_t k = 2; k <= a_.size(); ++k) {
        p_.push_back(a_[k - 1] * p_[k - 1] + p_[k - 2]);
        q_.push_back(a_[k - 1] * q_[k - 1] + q_[k - 2]);
    }
}

ContinuedFraction ContinuedFraction::periodic(const std::vector<std::int64_t>& pattern, int depth) {
    if (pattern.empty()) throw InvalidArgument("empty continued fraction pattern");
    std::vector<std::int64_t> a;
    for (int k = 0; k < depth; ++k) a.push_back(pattern[static_cast<std::size_t>(k) % pattern.size()]);
    return ContinuedFraction(std::move(a));
}

Index ContinuedFraction::q_index(int k) const {
    const BigInt& v = q(k);
    if (v > BigInt(std::numeric_limits<Index>::max())) throw InvalidArgument("q_k does not fit a 64-bit index");
    return static_cast<Index>(v);
}

double ContinuedFraction::value() const {
    return ratio(p(depth()), q(depth()));
}

double ratio(const BigInt& num, const BigInt& den) {
    using boost::multiprecision::cpp_bin_float_50;
    return static_cast<double>(cpp_bin_float_50(num) / cpp_bin_float_50(den));
}

Dyadic to_dyadic(double x) {
    if (!std::isfinite(x)) throw InvalidArgument("non-finite value");
    int exp = 0;
    double frac = std::frexp(x, &exp);  // x = frac * 2^exp, |frac| in [0.5, 1)
    auto m = static_cast<std::int64_t>(std::ldexp(frac, 53));
    int e = 53 - exp;
    Dyadic d;
    d.mantissa = m;
    if (e < 0) {
        d.mantissa <<= -e;
        e = 0;
    }
    while (e > 0 && d.mantissa != 0 && (d.mantissa & 1) == 0) {
        d.mantissa >>= 1;
        --e;
    }
    d.exponent = e;
    return d;
}

ContinuedFraction continued_fraction(double theta, int depth) {
    if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("theta must lie in (0,1)");
    if (depth < 1) throw InvalidArgument("depth must be >= 1");
    const Dyadic d = to_dyadic(theta);
    const BigInt den0 = BigInt(1) << d.exponent;
    BigInt num = d.mantissa, den = den0;
    std::vector<std::int64_t> a;
    for (int k = 1; k <= depth; ++k) {
        if (num == 0) {
            ContinuedFraction cf(a);
            throw RationalTheta(cf.p(k - 1), cf.q(k - 1), k - 1);
        }
        BigInt ak = den / num;
        if (ak > BigInt(std::numeric_limits<std::int64_t>::max()))
            throw InvalidArgument("continued fraction coefficient overflows 64 bits");
        a.push_back(static_cast<std::int64_t>(ak));
        BigInt next = den - ak * num;
        den = num;
        num = next;
    }
    ContinuedFraction cf(std::move(a));
    for (int k = 1; k <= depth; ++k) {
        // |theta - p/q| < 1/q^2  <=>  |m q - p 2^e| * q < 2^e
        BigInt diff = d.mantissa * cf.q(k) - cf.p(k) * den0;
        if (diff < 0) diff = -diff;
        if (!(diff * cf.q(k) < den0)) throw Error("convergent bound violated at level " + std::to_string(k));
    }
    return cf;
}

}  // namespace qcs
