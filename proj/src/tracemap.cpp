#include "qcspec/tracemap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "qcspec/generators.hpp"

namespace qcs {

namespace {

constexpr int kBigExponent = 300;  // rescale once |mantissa| > 2^300
constexpr std::int64_t kExponentLimit = std::int64_t(1) << 60;

template <class Scalar>
void normalize(ScaledValue<Scalar>& v) {
    const double a = std::abs(v.mantissa);
    if (a == 0 || !std::isfinite(a)) return;
    int e = 0;
    std::frexp(a, &e);
    if (e > kBigExponent || (v.exponent != 0 && e < -kBigExponent)) {
        v.mantissa *= std::ldexp(1.0, -e);
        v.exponent += e;
    }
}

template <class Scalar>
Scalar shift(const Scalar& m, std::int64_t by) {
    if (by == 0) return m;
    if (by < -4000) return Scalar(0);
    if (by > 4000) return m * std::numeric_limits<double>::infinity();
    return m * std::ldexp(1.0, static_cast<int>(by));
}

// 2 a b - c
template <class Scalar>
ScaledValue<Scalar> trace_step(const ScaledValue<Scalar>& a, const ScaledValue<Scalar>& b,
                               const ScaledValue<Scalar>& c) {
    ScaledValue<Scalar> p{Scalar(2) * a.mantissa * b.mantissa, a.exponent + b.exponent};
    ScaledValue<Scalar> r;
    r.exponent = std::max(p.exponent, c.exponent);
    r.mantissa = shift(p.mantissa, p.exponent - r.exponent) - shift(c.mantissa, c.exponent - r.exponent);
    normalize(r);
    return r;
}

template <class Scalar>
double abs_sq(const Scalar& x) {
    return std::norm(std::complex<double>(x));
}

template <class Scalar>
double fib_invariant(const Scalar& a, const Scalar& b, const Scalar& c) {
    // real part of the invariant; for complex orbits the invariant is complex
    const Scalar i = a * a + b * b + c * c - Scalar(2) * a * b * c;
    return std::real(std::complex<double>(i));
}

template <class Scalar>
void normalize(ScaledMatrix<Scalar>& m) {
    double big = 0;
    for (int i = 0; i < 4; ++i) big = std::max(big, std::abs(m.mantissa.data()[i]));
    if (big == 0 || !std::isfinite(big)) return;
    int e = 0;
    std::frexp(big, &e);
    if (e > kBigExponent || (m.exponent != 0 && e < -kBigExponent)) {
        m.mantissa *= std::ldexp(1.0, -e);
        m.exponent += e;
    }
}

template <class Scalar>
ScaledMatrix<Scalar> multiply(const ScaledMatrix<Scalar>& a, const ScaledMatrix<Scalar>& b) {
    ScaledMatrix<Scalar> r{a.mantissa * b.mantissa, a.exponent + b.exponent};
    normalize(r);
    return r;
}

}  // namespace

template <class Scalar>
double ScaledValue<Scalar>::log_abs() const {
    return std::log(std::abs(mantissa)) + static_cast<double>(exponent) * std::numbers::ln2;
}

template <class Scalar>
Scalar ScaledValue<Scalar>::value() const {
    return shift(mantissa, exponent);
}

template <class Scalar>
Scalar ScaledMatrix<Scalar>::half_trace() const {
    return shift(Scalar(mantissa.trace() / 2.0), exponent);
}

template <class Scalar>
TraceOrbit<Scalar> fib_orbit(double lambda, Scalar energy, int k_max) {
    if (k_max < 1) throw InvalidArgument("fib_orbit needs k_max >= 1");
    TraceOrbit<Scalar> o;
    o.lambda = lambda;
    o.energy = energy;
    auto& v = o.values;
    v.push_back({Scalar(1), 0});
    v.push_back({energy / 2.0, 0});
    v.push_back({(energy - lambda) / 2.0, 0});
    while (static_cast<int>(v.size()) < k_max + 2) {
        const std::size_t n = v.size();
        if (std::abs(v[n - 1].exponent) > kExponentLimit) {
            o.halted = true;
            break;
        }
        v.push_back(trace_step(v[n - 1], v[n - 2], v[n - 3]));
    }
    for (std::size_t i = 2; i < v.size(); ++i) {
        const bool plain = !v[i].scaled() && !v[i - 1].scaled() && !v[i - 2].scaled();
        o.invariant.push_back(plain ? fib_invariant(v[i].mantissa, v[i - 1].mantissa, v[i - 2].mantissa)
                                    : std::numeric_limits<double>::quiet_NaN());
    }
    return o;
}

namespace {

template <class Orbit>
EscapeReport classify(const Orbit& orbit) {
    const int K = orbit.k_max();
    if (K < 1) throw InvalidArgument("escape_classify needs an orbit with at least three values");
    EscapeReport r;
    auto big = [&](int k) { return orbit.log_abs(k) > 0; };
    std::vector<int> hits;
    for (int k = 0; k + 1 <= K; ++k)
        if (!big(k - 1) && big(k) && big(k + 1)) hits.push_back(k);
    if (!hits.empty()) {
        r.kind = EscapeReport::Kind::Escaped;
        r.k0 = hits.front();
        r.unique = hits.size() == 1;
        for (int k = r.k0; k + 2 <= K; ++k)
            if (!(orbit.log_abs(k + 2) > orbit.log_abs(k + 1) + orbit.log_abs(k))) r.super_growth = false;
        double f_prev = 1, f = 1;  // F_0 = F_1 = 1
        r.growth_constant = INFINITY;
        for (int k = r.k0; k <= K; ++k) {
            const double fib = (k - r.k0 <= 1) ? 1.0 : f;
            r.growth_constant = std::min(r.growth_constant, std::exp(orbit.log_abs(k) / fib));
            if (k - r.k0 >= 1) {
                const double next = f + f_prev;
                f_prev = f;
                f = next;
            }
        }
    }
    const double limit = 1 + orbit.lambda / 2 + 1e-12;
    for (int k = -1; k <= K; ++k) {
        const double a = std::exp(orbit.log_abs(k));
        r.max_abs = std::max(r.max_abs, a);
        if (a > limit) r.bound_holds = false;
    }
    return r;
}

}  // namespace

EscapeReport escape_classify(const RealOrbit& orbit) { return classify(orbit); }

EscapeReport escape_classify(const SturmianOrbit<double>& orbit) {
    auto r = classify(orbit);
    r.assumed_condition = true;
    return r;
}

bool b_infty_member(double lambda, double energy, int k_max) {
    const double limit = 1 + lambda / 2 + 1e-12;
    double xm = 1, x0 = energy / 2, x1 = (energy - lambda) / 2;
    if (std::abs(xm) > limit || std::abs(x0) > limit) return false;
    if (k_max >= 1 && std::abs(x1) > limit) return false;
    for (int k = 2; k <= k_max; ++k) {
        const double x2 = 2 * x1 * x0 - xm;
        if (!(std::abs(x2) <= limit)) return false;
        xm = x0;
        x0 = x1;
        x1 = x2;
    }
    return true;
}

// ---------------------------------------------------------------------------

template <class Scalar>
ScaledMatrix<Scalar> matrix_power(const ScaledMatrix<Scalar>& m, std::int64_t a) {
    if (a < 1) throw InvalidArgument("matrix_power needs a >= 1");
    if (a == 1) return m;
    const Scalar t = m.mantissa.trace();
    const Scalar d = m.mantissa.determinant();
    // (P_n, P_{n-1}) with a common power-of-two scale
    Scalar p = 1, pm = 0;
    std::int64_t e = 0;
    for (std::int64_t n = 1; n < a; ++n) {
        const Scalar next = t * p - d * pm;
        pm = p;
        p = next;
        const double big = std::max(std::abs(p), std::abs(pm));
        if (big > 0 && std::isfinite(big)) {
            int be = 0;
            std::frexp(big, &be);
            if (be > kBigExponent || be < -kBigExponent) {
                p *= std::ldexp(1.0, -be);
                pm *= std::ldexp(1.0, -be);
                e += be;
            }
        }
    }
    ScaledMatrix<Scalar> r;
    r.mantissa = p * m.mantissa - d * pm * Eigen::Matrix<Scalar, 2, 2>::Identity();
    r.exponent = a * m.exponent + e;
    normalize(r);
    return r;
}

template <class Scalar>
SturmianOrbit<Scalar> sturmian_orbit(double lambda, const ContinuedFraction& cf, Scalar energy, int k_max) {
    if (k_max < 0) throw InvalidArgument("k_max must be >= 0");
    if (k_max > cf.depth()) throw InvalidArgument("sturmian_orbit: continued fraction shorter than k_max");
    SturmianOrbit<Scalar> o;
    o.lambda = lambda;
    o.energy = energy;
    o.a.assign(cf.coefficients().begin(), cf.coefficients().begin() + k_max);
    ScaledMatrix<Scalar> mm, m0;
    mm.mantissa << Scalar(1), Scalar(-lambda), Scalar(0), Scalar(1);
    m0.mantissa << energy, Scalar(-1), Scalar(1), Scalar(0);
    o.matrices = {mm, m0};
    for (int k = 0; k < k_max; ++k) {
        const auto& prev = o.matrices[static_cast<std::size_t>(k)];
        const auto& cur = o.matrices[static_cast<std::size_t>(k + 1)];
        if (std::abs(cur.exponent) > kExponentLimit) break;
        o.matrices.push_back(multiply(prev, matrix_power(cur, cf.a(k + 1))));
    }
    auto half_trace_scaled = [](const ScaledMatrix<Scalar>& m) {
        ScaledValue<Scalar> v{m.mantissa.trace() / 2.0, m.exponent};
        normalize(v);
        return v;
    };
    for (const auto& m : o.matrices) o.values.push_back(half_trace_scaled(m));
    for (std::size_t i = 1; i < o.matrices.size(); ++i) {
        o.cross.push_back(half_trace_scaled(multiply(o.matrices[i - 1], o.matrices[i])));
        const auto& xa = o.values[i - 1];
        const auto& xb = o.values[i];
        const auto& z = o.cross.back();
        const bool plain = !xa.scaled() && !xb.scaled() && !z.scaled();
        o.invariant.push_back(plain ? fib_invariant(xa.mantissa, xb.mantissa, z.mantissa)
                                    : std::numeric_limits<double>::quiet_NaN());
    }
    return o;
}

// ---------------------------------------------------------------------------

namespace {

bool golden_prefix(const ContinuedFraction& cf, int k) {
    for (int i = 1; i <= std::min(k, cf.depth()); ++i)
        if (cf.a(i) != 1) return false;
    return true;
}

}  // namespace

double half_trace(double lambda, const ContinuedFraction& cf, int k, double energy) {
    if (k < 0) throw InvalidArgument("half_trace needs k >= 0");
    if (golden_prefix(cf, k)) {
        if (k == 0) return energy / 2;
        double xm = 1, x0 = energy / 2, x1 = (energy - lambda) / 2;
        for (int j = 2; j <= k; ++j) {
            const double x2 = 2 * x1 * x0 - xm;
            xm = x0;
            x0 = x1;
            x1 = x2;
        }
        return x1;
    }
    return sturmian_orbit(lambda, cf, energy, k).x(k);
}

BandSet sigma_k(double lambda, int k, double resolution) {
    return sigma_k(lambda, ContinuedFraction::periodic({1}, std::max(k, 1)), k, resolution);
}

BandSet sigma_k(double lambda, const ContinuedFraction& cf, int k, double resolution) {
    if (k < 0 || k > cf.depth()) throw InvalidArgument("sigma_k: level out of range");
    if (!(resolution > 0)) throw InvalidArgument("sigma_k: resolution must be positive");
    const Word w = standard_words(cf, k)[k];
    const int q = static_cast<int>(w.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(q, q);
    for (int i = 0; i < q; ++i) {
        h(i, i) = lambda * w[static_cast<std::size_t>(i)];
        if (i + 1 < q) h(i, i + 1) = h(i + 1, i) = 1.0;
    }
    std::vector<double> edges;
    for (double corner : {1.0, -1.0}) {
        Eigen::MatrixXd hp = h;
        hp(0, q - 1) += corner;
        hp(q - 1, 0) += corner;
        if (q == 1) hp(0, 0) = h(0, 0) + 2 * corner;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hp, Eigen::EigenvaluesOnly);
        for (int i = 0; i < q; ++i) edges.push_back(es.eigenvalues()(i));
    }
    std::sort(edges.begin(), edges.end());

    BandSet out;
    out.k = k;
    out.max_bands = q;
    auto g = [&](double e) { return std::abs(half_trace(lambda, cf, k, e)) - 1.0; };
    const std::size_t n = edges.size();
    std::vector<double> polished = edges;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = edges[i];
        const double s = std::max(1.0, std::abs(e));
        double room = INFINITY;
        if (i > 0) room = std::min(room, 0.5 * (e - edges[i - 1]));
        if (i + 1 < n) room = std::min(room, 0.5 * (edges[i + 1] - e));
        for (double h = 1e-14 * s; h <= 1e-8 * s && h < room; h *= 4) {
            double lo = e - h, hi = e + h;
            double glo = g(lo), ghi = g(hi);
            if (!((glo < 0 && ghi > 0) || (glo > 0 && ghi < 0))) continue;
            while (hi - lo > resolution) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const double gm = g(mid);
                if ((gm < 0) == (glo < 0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            polished[i] = 0.5 * (lo + hi);
            ++out.certified_edges;
            break;
        }
    }
    std::vector<Interval> bands;
    for (std::size_t j = 0; j + 1 < n; j += 2) bands.push_back({polished[j], std::max(polished[j], polished[j + 1])});
    out.band_count = static_cast<int>(bands.size());
    out.bands = IntervalSet(std::move(bands));
    if (out.band_count > out.max_bands) throw Error("sigma_k produced more bands than the period allows");
    return out;
}

std::optional<int> complex_escape_time(double lambda, std::complex<double> z, int k_max) {
    const auto o = fib_orbit(lambda, z, k_max + 1);
    for (int k = 0; k + 1 <= o.k_max() && k <= k_max; ++k)
        if (o.log_abs(k) > 0 && o.log_abs(k + 1) > 0) return k;
    return std::nullopt;
}

template struct ScaledValue<double>;
template struct ScaledValue<std::complex<double>>;
template struct ScaledMatrix<double>;
template struct ScaledMatrix<std::complex<double>>;
template TraceOrbit<double> fib_orbit<double>(double, double, int);
template TraceOrbit<std::complex<double>> fib_orbit<std::complex<double>>(double, std::complex<double>, int);
template ScaledMatrix<double> matrix_power<double>(const ScaledMatrix<double>&, std::int64_t);
template ScaledMatrix<std::complex<double>> matrix_power<std::complex<double>>(const ScaledMatrix<std::complex<double>>&,
                                                                             std::int64_t);
template SturmianOrbit<double> sturmian_orbit<double>(double, const ContinuedFraction&, double, int);
template SturmianOrbit<std::complex<double>> sturmian_orbit<std::complex<double>>(double, const ContinuedFraction&,
                                                                                 std::complex<double>, int);

}  // namespace qcs
