#include "qcspec/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <Eigen/LU>

#include "qcspec/fit.hpp"

namespace qcs {

namespace {

constexpr int kRescaleEvery = 64;
constexpr double kDetTolerance = 1e-10;

double abs2(double x) { return x * x; }
double abs2(const Complex& z) { return std::norm(z); }

double log_add_exp(double a, double b) {
    if (a == -INFINITY) return b;
    if (b == -INFINITY) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

template <class Scalar>
double max_abs(const Matrix2<Scalar>& m) {
    double x = 0;
    for (int i = 0; i < 4; ++i) x = std::max(x, std::abs(m.data()[i]));
    return x;
}

// Divides m by a power of two (exact) and returns the log of the factor.
template <class Scalar>
double renormalize(Matrix2<Scalar>& m) {
    const double big = max_abs(m);
    if (big == 0 || !std::isfinite(big)) return 0;
    int e = 0;
    std::frexp(big, &e);
    m *= std::ldexp(1.0, -e);
    return e * std::numbers::ln2;
}

}  // namespace

SamplingFunction SamplingFunction::symbolwise(const std::vector<double>& values) {
    SamplingFunction f;
    for (std::size_t s = 0; s < values.size(); ++s) f.table[Word{static_cast<Symbol>(s)}] = values[s];
    return f;
}

SamplingFunction SamplingFunction::from_strings(int M, int N, const std::map<std::string, double>& table,
                                                const Alphabet& alphabet) {
    if (M < 0 || N < 0) throw InvalidArgument("sampling offsets must be non-negative");
    SamplingFunction f;
    f.M = M;
    f.N = N;
    for (const auto& [key, value] : table) {
        Word w = parse_word(key, alphabet);
        if (static_cast<int>(w.size()) != M + N + 1)
            throw InvalidArgument("sampling table key \"" + key + "\" has the wrong length");
        f.table[w] = value;
    }
    return f;
}

double SamplingFunction::operator()(const Window& w, Index n) const {
    if (!w.covers(n - M, n + N + 1))
        throw WindowTooShort(w.size(), static_cast<Index>(M + N + 1));
    Word key(w.symbols.begin() + (n - M - w.start), w.symbols.begin() + (n + N + 1 - w.start));
    auto it = table.find(key);
    if (it == table.end())
        throw InvalidArgument("sampling table has no entry for \"" + format_word(key, w.alphabet) + "\"");
    return it->second;
}

double Potential::operator()(Index n) const {
    if (n < start || n >= end()) throw InvalidArgument("potential evaluated outside its support at n = " + std::to_string(n));
    return values[static_cast<std::size_t>(n - start)];
}

double Potential::sup_norm() const {
    double m = 0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> Potential::value_set() const {
    std::set<double> s(values.begin(), values.end());
    return {s.begin(), s.end()};
}

Potential Potential::constant(Index first, Index last, double v) {
    if (last < first) throw InvalidArgument("empty range");
    return Potential{first, std::vector<double>(static_cast<std::size_t>(last - first), v)};
}

Potential potential_from_sampling(const Window& w, const SamplingFunction& f, Index first, Index last) {
    if (last < first) throw InvalidArgument("empty range");
    if (!w.covers(first - f.M, last + f.N)) {
        throw InvalidArgument("window [" + std::to_string(w.start) + ", " + std::to_string(w.end()) +
                    ") does not cover the sampling range [" + std::to_string(first - f.M) + ", " +
                    std::to_string(last + f.N) + ")");
    }
    Potential p{first, {}};
    p.values.reserve(static_cast<std::size_t>(last - first));
    for (Index n = first; n < last; ++n) p.values.push_back(f(w, n));
    return p;
}

// ---------------------------------------------------------------------------

template <class Scalar>
double spectral_norm(const Matrix2<Scalar>& a) {
    double f = 0;
    for (int i = 0; i < 4; ++i) f += abs2(a.data()[i]);
    const double d = std::abs(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0));
    const double disc = std::max(0.0, f * f - 4 * d * d);
    return std::sqrt(0.5 * (f + std::sqrt(disc)));
}

template <class Scalar>
Matrix2<Scalar> one_step(double v, Scalar energy) {
    Matrix2<Scalar> t;
    t << energy - v, Scalar(-1), Scalar(1), Scalar(0);
    return t;
}

template <class Scalar>
double TransferProduct<Scalar>::log_norm() const {
    return std::log(spectral_norm(matrix)) + log_scale;
}

template <class Scalar>
double TransferProduct<Scalar>::norm() const {
    return std::exp(log_norm());
}

template <class Scalar>
Matrix2<Scalar> TransferProduct<Scalar>::value() const {
    return matrix * std::exp(log_scale);
}

template <class Scalar>
Scalar TransferProduct<Scalar>::half_trace() const {
    return matrix.trace() * (0.5 * std::exp(log_scale));
}

template <class Scalar>
double TransferProduct<Scalar>::log_abs_half_trace() const {
    return std::log(std::abs(matrix.trace()) / 2) + log_scale;
}

template <class Scalar>
TransferProduct<Scalar> transfer_product(const Potential& v, Scalar energy, Index first, Index last,
                                         bool record_prefix) {
    if (last < first) throw InvalidArgument("transfer_product: last < first");
    if (!v.covers(first, last)) throw InvalidArgument("transfer_product: range outside the potential");
    TransferProduct<Scalar> out;
    out.first = first;
    out.last = last;
    Matrix2<Scalar>& m = out.matrix;
    if (record_prefix) out.prefix_log_norms.reserve(static_cast<std::size_t>(last - first));
    const double* vp = v.values.data() + (first - v.start);
    for (Index n = first; n < last; ++n) {
        const Scalar c = energy - *vp++;
        const Scalar a = m(0, 0), b = m(0, 1);
        m(0, 0) = c * a - m(1, 0);
        m(0, 1) = c * b - m(1, 1);
        m(1, 0) = a;
        m(1, 1) = b;
        if ((n - first + 1) % kRescaleEvery == 0) out.log_scale += renormalize(m);
        if (record_prefix) out.prefix_log_norms.push_back(std::log(spectral_norm(m)) + out.log_scale);
    }
    out.log_scale += renormalize(m);
    const double det_scaled = std::abs(m.determinant() - Scalar(std::exp(-2 * out.log_scale)));
    const double n2 = spectral_norm(m);
    out.det_error = det_scaled / std::max(std::exp(-2 * out.log_scale), n2 * n2);
    out.det_certified = out.det_error <= kDetTolerance;
    return out;
}

template <class Scalar>
Vector2<Scalar> propagate(const Potential& v, Scalar energy, const Vector2<Scalar>& u, Index from, Index to) {
    Vector2<Scalar> s = u;
    if (to >= from) {
        if (!v.covers(from, to)) throw InvalidArgument("propagate: range outside the potential");
        for (Index n = from; n < to; ++n) {
            const Scalar next = (energy - v(n)) * s(0) - s(1);
            s(1) = s(0);
            s(0) = next;
        }
    } else {
        if (!v.covers(to, from)) throw InvalidArgument("propagate: range outside the potential");
        for (Index n = from - 1; n >= to; --n) {
            // U(n) = T_n^{-1} U(n+1)
            const Scalar prev = (energy - v(n)) * s(1) - s(0);
            s(0) = s(1);
            s(1) = prev;
        }
    }
    return s;
}

// ---------------------------------------------------------------------------

template <class Scalar>
Scalar SolutionProfile<Scalar>::u(Index n) const {
    const Index i = n - (first - 1);
    if (i < 0 || i >= static_cast<Index>(mantissa.size())) throw InvalidArgument("solution index out of range");
    return mantissa[static_cast<std::size_t>(i)] * std::exp(scale[static_cast<std::size_t>(i)]);
}

template <class Scalar>
SolutionProfile<Scalar> solve_equation(const Potential& v, Scalar energy, const Vector2<Scalar>& u0, Index first,
                                       Index last) {
    if (last < first) throw InvalidArgument("solve_equation: last < first");
    if (!v.covers(first, last)) throw InvalidArgument("solve_equation: range outside the potential");
    SolutionProfile<Scalar> out;
    out.first = first;
    Scalar x = u0(0), y = u0(1);  // u(n), u(n-1) in units of exp(s)
    double s = 0;
    out.mantissa = {y, x};
    out.scale = {0.0, 0.0};
    out.log_state_norm.push_back(std::log(std::sqrt(abs2(x) + abs2(y))));
    double log_sum = -INFINITY;
    for (Index n = first; n < last; ++n) {
        log_sum = log_add_exp(log_sum, std::log(abs2(x)) + 2 * s);
        out.log_cumulative.push_back(0.5 * log_sum);
        const Scalar next = (energy - v(n)) * x - y;
        y = x;
        x = next;
        const double size = std::abs(x) + std::abs(y);
        if (size > 1e100 || (size < 1e-100 && size > 0)) {
            int e = 0;
            std::frexp(size, &e);
            const double f = std::ldexp(1.0, -e);
            x *= f;
            y *= f;
            s += e * std::numbers::ln2;
        }
        out.mantissa.push_back(x);
        out.scale.push_back(s);
        out.log_state_norm.push_back(std::log(std::sqrt(abs2(x) + abs2(y))) + s);
    }
    // Power-law fit of the cumulative norm.
    const Index total = last - first;
    out.power_law = false;
    if (total >= 16) {
        std::vector<double> lx, ly;
        Index prev = 0;
        for (double l : log_space(std::min<double>(10.0, static_cast<double>(total) / 4), static_cast<double>(total), 24)) {
            const Index L = static_cast<Index>(std::llround(l));
            if (L <= prev) continue;
            prev = L;
            lx.push_back(std::log(static_cast<double>(L)));
            ly.push_back(out.log_cumulative[static_cast<std::size_t>(L - 1)]);
        }
        if (lx.size() >= 4 && std::all_of(ly.begin(), ly.end(), [](double t) { return std::isfinite(t); })) {
            const LinearFit f = least_squares(lx, ly);
            const auto w = windowed_slopes(lx, ly, std::max<int>(3, static_cast<int>(lx.size()) / 4), false);
            out.gamma = f.slope;
            out.residual = f.residual;
            out.gamma1 = w.min;
            out.gamma2 = w.max;
            out.power_law = f.residual <= 0.25;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

void check_repetition(const Potential& v, int p, Index from) {
    for (Index m = from; m < p; ++m)
        if (v(m + p) != v(m)) throw RepetitionError(m);
}

double log_norm_applied(const TransferProduct<double>& a, const Vector2<double>& u) {
    return std::log((a.matrix * u).norm()) + a.log_scale;
}

}  // namespace

GordonRecord gordon_two_block(const Potential& v, int p, double energy, const Vector2<double>& u0) {
    if (p < 1) throw InvalidArgument("period must be >= 1");
    if (!v.covers(0, 2 * static_cast<Index>(p))) throw InvalidArgument("potential does not cover [0, 2p)");
    check_repetition(v, p, 0);
    const auto a = transfer_product(v, energy, 0, p);
    const auto b = transfer_product(v, energy, p, 2 * static_cast<Index>(p));
    const double log_up = log_norm_applied(a, u0);
    Vector2<double> up_dir = a.matrix * u0;
    const double log_u2p = std::log((b.matrix * up_dir).norm()) + b.log_scale + a.log_scale;
    const double lhs = std::max(log_up, log_u2p);
    const double log_tr = std::log(std::abs(a.matrix.trace())) + a.log_scale;
    const double bound = std::log(u0.norm()) - std::log(2.0) - std::max(log_tr, 0.0);
    GordonRecord r;
    r.p = p;
    r.lhs = std::exp(lhs);
    r.bound = std::exp(bound);
    r.satisfied = lhs >= bound - 1e-12;
    return r;
}

GordonRecord gordon_three_block(const Potential& v, int p, double energy, const Vector2<double>& u0) {
    if (p < 1) throw InvalidArgument("period must be >= 1");
    const Index pp = p;
    if (!v.covers(-pp, 2 * pp)) throw InvalidArgument("potential does not cover [-p, 2p)");
    check_repetition(v, p, -pp);
    const auto a = transfer_product(v, energy, 0, pp);
    const auto b = transfer_product(v, energy, pp, 2 * pp);
    const auto c = transfer_product(v, energy, -pp, 0);
    const double log_up = log_norm_applied(a, u0);
    const double log_u2p = std::log((b.matrix * (a.matrix * u0)).norm()) + b.log_scale + a.log_scale;
    // A^{-1} = adj(M) exp(s) for A = M exp(s) with det A = 1
    Matrix2<double> adj;
    adj << c.matrix(1, 1), -c.matrix(0, 1), -c.matrix(1, 0), c.matrix(0, 0);
    const double log_um = std::log((adj * u0).norm()) + c.log_scale;
    const double lhs = std::max({log_up, log_u2p, log_um}) - std::log(u0.norm());
    GordonRecord r;
    r.p = p;
    r.lhs = std::exp(lhs);
    r.bound = 0.5;
    r.satisfied = lhs >= std::log(0.5) - 1e-12;
    return r;
}

SquarePeriods find_square_periods(const Potential& v, int p_max) {
    SquarePeriods out;
    auto holds = [&](Index p, Index from) {
        for (Index m = from; m < p; ++m)
            if (v(m + p) != v(m)) return false;
        return true;
    };
    for (int p = 1; p <= p_max; ++p) {
        const Index pp = p;
        if (v.covers(0, 2 * pp) && holds(pp, 0)) out.two_block.push_back(p);
        if (v.covers(-pp, 2 * pp) && holds(pp, -pp)) out.three_block.push_back(p);
    }
    return out;
}

std::vector<Vector2<double>> unit_circle_vectors(int count) {
    std::vector<Vector2<double>> out;
    for (int j = 0; j < count; ++j) {
        const double t = 2 * std::numbers::pi * j / count;
        out.emplace_back(std::cos(t), std::sin(t));
    }
    return out;
}

template double spectral_norm<double>(const Matrix2<double>&);
template double spectral_norm<Complex>(const Matrix2<Complex>&);
template Matrix2<double> one_step<double>(double, double);
template Matrix2<Complex> one_step<Complex>(double, Complex);
template struct TransferProduct<double>;
template struct TransferProduct<Complex>;
template TransferProduct<double> transfer_product<double>(const Potential&, double, Index, Index, bool);
template TransferProduct<Complex> transfer_product<Complex>(const Potential&, Complex, Index, Index, bool);
template Vector2<double> propagate<double>(const Potential&, double, const Vector2<double>&, Index, Index);
template Vector2<Complex> propagate<Complex>(const Potential&, Complex, const Vector2<Complex>&, Index, Index);
template struct SolutionProfile<double>;
template struct SolutionProfile<Complex>;
template SolutionProfile<double> solve_equation<double>(const Potential&, double, const Vector2<double>&, Index, Index);
template SolutionProfile<Complex> solve_equation<Complex>(const Potential&, Complex, const Vector2<Complex>&, Index,
                                                          Index);

}  // namespace qcs
