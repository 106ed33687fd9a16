#include "qcspec/cmv.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Core>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "qcspec/parallel.hpp"

namespace qcs {

DiskSampling DiskSampling::symbolwise(const std::vector<Cplx>& values) {
    DiskSampling g;
    for (std::size_t s = 0; s < values.size(); ++s) g.table[Word{static_cast<Symbol>(s)}] = values[s];
    return g;
}

Cplx DiskSampling::operator()(const Window& w, Index n) const {
    Word key;
    for (Index m = n - M; m <= n + N; ++m) key.push_back(w.at(m));
    const auto it = table.find(key);
    if (it == table.end()) throw InvalidArgument("no value for the word '" + format_word(key, w.alphabet) + "'");
    return it->second;
}

double VerblunskyCoefficients::consistency_error() const {
    double e = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i) e = std::max(e, std::abs(std::norm(alpha[i]) + rho[i] * rho[i] - 1));
    return e;
}

VerblunskyCoefficients VerblunskyCoefficients::from_values(Index first, std::vector<Cplx> alpha) {
    VerblunskyCoefficients out;
    out.first = first;
    for (const auto& a : alpha) {
        if (!(std::abs(a) < 1.0)) throw OutsideDisk("", a);
        out.rho.push_back(std::sqrt((1.0 - std::abs(a)) * (1.0 + std::abs(a))));
    }
    out.alpha = std::move(alpha);
    return out;
}

VerblunskyCoefficients verblunsky_from_subshift(const Window& w, const DiskSampling& g, Index first, Index last) {
    if (last < first) throw InvalidArgument("empty range");
    if (!w.covers(first - g.M, last + g.N)) throw InvalidArgument("window does not cover the sampling range");
    for (const auto& [word, value] : g.table)
        if (!(std::abs(value) < 1.0)) throw OutsideDisk(format_word(word, w.alphabet), value);
    std::vector<Cplx> a;
    for (Index n = first; n < last; ++n) a.push_back(g(w, n));
    return VerblunskyCoefficients::from_values(first, std::move(a));
}

namespace {

bool even(Index j) { return ((j % 2) + 2) % 2 == 0; }

CMVMatrix section(const VerblunskyCoefficients& alpha, Index a, Index size, Cplx left, Cplx right,
                  CMVVariant variant) {
    if (size < 1) throw InvalidArgument("CMV size must be positive");
    for (Cplx b : {left, right})
        if (std::abs(std::abs(b) - 1.0) > 1e-14) throw InvalidArgument("boundary coefficient must be unimodular");
    const Index interior_first = a, interior_last = a + size - 1;  // coefficients a .. a+size-2 are used
    if (size > 1 && (alpha.first > interior_first || alpha.end() < interior_last))
        throw InvalidArgument("not enough Verblunsky coefficients for this size (need indices " +
                              std::to_string(interior_first) + ".." + std::to_string(interior_last - 1) + ")");
    Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(size, size);
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(size, size);
    for (Index j = a - 1; j <= a + size - 1; ++j) {
        const bool cut = j == a - 1 || j == a + size - 1;
        const Cplx aj = j == a - 1 ? left : (cut ? right : alpha.a(j));
        const double rj = cut ? 0.0 : alpha.rho[static_cast<std::size_t>(j - alpha.first)];
        auto& X = even(j) ? L : M;
        const Index i = j - a;
        if (i >= 0) X(i, i) = std::conj(aj);
        if (i + 1 < size) X(i + 1, i + 1) = -aj;
        if (i >= 0 && i + 1 < size) X(i, i + 1) = X(i + 1, i) = rj;
    }
    CMVMatrix out;
    out.variant = variant;
    out.first = a;
    out.matrix = L * M;
    out.unitarity_error =
        (out.matrix.adjoint() * out.matrix - Eigen::MatrixXcd::Identity(size, size)).cwiseAbs().maxCoeff();
    return out;
}

}  // namespace

CMVMatrix build_cmv(const VerblunskyCoefficients& alpha, Index size, Cplx boundary) {
    // a_{-1} = -1 leaves the 1 in the top-left corner of M
    return section(alpha, 0, size, -1.0, boundary, CMVVariant::HalfLine);
}

CMVMatrix build_extended_cmv(const VerblunskyCoefficients& alpha, Index center, Index size, Cplx boundary) {
    return section(alpha, center - size / 2, size, boundary, boundary, CMVVariant::Extended);
}

Eigenphases eigenphases(const CMVMatrix& c) {
    // zgeev is an order of magnitude faster than the Eigen solver at these sizes
    Eigen::MatrixXcd a = c.matrix;
    const lapack_int n = static_cast<lapack_int>(a.rows());
    Eigen::VectorXcd w(n);
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(), nullptr, 1,
                                          nullptr, 1);
    if (info != 0) throw Error("CMV eigensolver failed (zgeev info " + std::to_string(info) + ")");
    Eigenphases out;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Cplx z = w(i);
        out.modulus_error = std::max(out.modulus_error, std::abs(std::abs(z) - 1.0));
        double t = std::arg(z);
        if (t < 0) t += 2 * std::numbers::pi;
        out.phases.push_back(t);
    }
    std::sort(out.phases.begin(), out.phases.end());
    return out;
}

double covered_arc(const std::vector<double>& p, double eps) {
    constexpr double two_pi = 2 * std::numbers::pi;
    if (p.empty()) return 0;
    if (!(eps >= 0)) throw InvalidArgument("eps must be non-negative");
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double gap = i + 1 < p.size() ? p[i + 1] - p[i] : p.front() + two_pi - p.back();
        s += std::min(gap, 2 * eps);
    }
    return std::min(s, two_pi);
}

namespace {

CMVSpectrum summarize(std::vector<CMVMatrix> mats, Index size, const std::vector<double>& eps) {
    CMVSpectrum out;
    out.size = size;
    out.phases = static_cast<int>(mats.size());
    out.eps = eps;
    std::vector<Eigenphases> ph(mats.size());
    parallel_for(mats.size(), [&](std::size_t i) { ph[i] = eigenphases(mats[i]); });
    for (std::size_t i = 0; i < mats.size(); ++i) {
        out.unitarity_error = std::max(out.unitarity_error, mats[i].unitarity_error);
        out.modulus_error = std::max(out.modulus_error, ph[i].modulus_error);
        out.eigenphases.insert(out.eigenphases.end(), ph[i].phases.begin(), ph[i].phases.end());
    }
    std::sort(out.eigenphases.begin(), out.eigenphases.end());
    for (double e : eps) out.covered.push_back(covered_arc(out.eigenphases, e));
    return out;
}

}  // namespace

CMVSpectrum cmv_spectrum_approx(const Model& model, const DiskSampling& g, Index size, int phase_samples,
                                const std::vector<double>& eps) {
    if (size < 64) throw InvalidArgument("cmv_spectrum_approx needs size >= 64");
    if (phase_samples < 1) throw InvalidArgument("need at least one phase");
    const Index a = -size / 2;
    std::vector<CMVMatrix> mats;
    for (int j = 0; j < phase_samples; ++j) {
        const Window w = model.window(a - g.M, a + size + g.N, j, phase_samples);
        const auto alpha = verblunsky_from_subshift(w, g, a, a + size);
        mats.push_back(build_extended_cmv(alpha, 0, size));
    }
    return summarize(std::move(mats), size, eps);
}

CMVSpectrum cmv_spectrum_approx(const VerblunskyCoefficients& alpha, Index size, const std::vector<double>& eps) {
    if (size < 64) throw InvalidArgument("cmv_spectrum_approx needs size >= 64");
    return summarize({build_extended_cmv(alpha, alpha.first + size / 2, size)}, size, eps);
}

}  // namespace qcs
