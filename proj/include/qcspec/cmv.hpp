#pragma once

// CMV and extended CMV matrices from Verblunsky coefficients sampled along a
// subshift.
//
// Theta_j = [[conj(a_j), rho_j], [rho_j, -a_j]],  rho_j = sqrt(1 - |a_j|^2).
// C = L M with L = Theta_0 + Theta_2 + ... and M = 1 + Theta_1 + Theta_3 + ...
// (direct sums, Theta_j acting on sites j, j+1).  The half-line matrix is the
// case a_{-1} = -1.  Finite sections replace the coefficient of every block
// cut by the section boundary with a unimodular value, which keeps them
// exactly unitary.

#include <complex>
#include <map>
#include <vector>

#include <Eigen/Core>

#include "qcspec/model.hpp"
#include "qcspec/words.hpp"

namespace qcs {

using Cplx = std::complex<double>;

/// Locally constant map into the open unit disk: alpha_n = g(w[n-M] ... w[n+N]).
struct DiskSampling {
    int M = 0;
    int N = 0;
    std::map<Word, Cplx> table;

    static DiskSampling symbolwise(const std::vector<Cplx>& values);
    Cplx operator()(const Window& w, Index n) const;
};

class OutsideDisk : public Error {
public:
    OutsideDisk(const std::string& word, Cplx value)
        : Error("Verblunsky coefficient " + std::to_string(std::abs(value)) + " for word '" + word +
                "' is not inside the unit disk"),
          word(word), value(value) {}
    std::string word;
    Cplx value;
};

struct VerblunskyCoefficients {
    Index first = 0;
    std::vector<Cplx> alpha;
    std::vector<double> rho;

    Index end() const { return first + static_cast<Index>(alpha.size()); }
    Cplx a(Index n) const { return alpha.at(static_cast<std::size_t>(n - first)); }
    /// max | |a|^2 + rho^2 - 1 |
    double consistency_error() const;

    static VerblunskyCoefficients from_values(Index first, std::vector<Cplx> alpha);
};

/// alpha_n for first <= n < last; the window must cover [first - M, last + N).
VerblunskyCoefficients verblunsky_from_subshift(const Window& w, const DiskSampling& g, Index first, Index last);

enum class CMVVariant { HalfLine, Extended };

struct CMVMatrix {
    CMVVariant variant = CMVVariant::HalfLine;
    Index first = 0;  // site of row 0
    Eigen::MatrixXcd matrix;
    double unitarity_error = 0;  // max |(C*C - I)_{ij}|

    Index size() const { return matrix.rows(); }
    Cplx entry(Index i, Index j) const { return matrix(i - first, j - first); }
};

/// Sites 0..size-1 with a_{-1} = -1 and a_{size-1} replaced by `boundary`.
/// Needs coefficients a_0 .. a_{size-2}.
CMVMatrix build_cmv(const VerblunskyCoefficients& alpha, Index size, Cplx boundary = -1.0);

/// Sites center - size/2 .. center - size/2 + size - 1; the two coefficients
/// whose blocks are cut (a_{first-1}, a_{first+size-1}) are replaced by
/// `boundary`.  Needs the coefficients in between.
CMVMatrix build_extended_cmv(const VerblunskyCoefficients& alpha, Index center, Index size, Cplx boundary = -1.0);

/// Sorted eigenphases in [0, 2 pi) and the largest | |z| - 1 |.
struct Eigenphases {
    std::vector<double> phases;
    double modulus_error = 0;
};
Eigenphases eigenphases(const CMVMatrix& c);

/// Measure of the union of arcs (theta - eps, theta + eps).
double covered_arc(const std::vector<double>& sorted_phases, double eps);

struct CMVSpectrum {
    Index size = 0;
    int phases = 0;
    std::vector<double> eigenphases;  // all truncations, sorted
    double unitarity_error = 0;
    double modulus_error = 0;
    std::vector<double> eps;
    std::vector<double> covered;      // covered_arc at each eps
};

/// Extended-CMV truncations centred at 0 for `phase_samples` phases of a
/// symbolic model; the covered arc is reported for each eps.
CMVSpectrum cmv_spectrum_approx(const Model& model, const DiskSampling& g, Index size, int phase_samples,
                                const std::vector<double>& eps);
/// Same for one fixed coefficient sequence (constant families and the like).
CMVSpectrum cmv_spectrum_approx(const VerblunskyCoefficients& alpha, Index size, const std::vector<double>& eps);

}  // namespace qcs
