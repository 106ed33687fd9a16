#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qcs {

using Index = std::int64_t;
using Symbol = std::uint8_t;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A finite window was asked for statistics it cannot support.
class WindowTooShort : public Error {
public:
    WindowTooShort(Index have, Index need)
        : Error("window too short: length " + std::to_string(have) + ", need at least " +
                std::to_string(need)),
          length(have), minimum_length(need) {}
    Index length;
    Index minimum_length;
};

/// Exact non-negative-denominator rational; always stored reduced.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (d == 0) throw InvalidArgument("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        auto g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
};

}  // namespace qcs
