#pragma once

// Lyapunov exponents, zero sets, band-set approximants of the spectrum and
// box-counting dimension.

#include <vector>

#include "qcspec/interval_set.hpp"
#include "qcspec/model.hpp"
#include "qcspec/tracemap.hpp"

namespace qcs {

struct LyapunovEstimate {
    double energy = 0;
    double gamma = 0;   // mean over phases of (1/n) log ||A_n||
    Index n = 0;
    double spread = 0;  // max - min of the per-phase values
    int phases = 1;
};

/// A_n = T_{n-1} ... T_0 at `phase_samples` phases of the model.
LyapunovEstimate lyapunov(const Model& model, double energy, Index n, int phase_samples = 1);
/// Same with potentials already sampled on [0, n).
LyapunovEstimate lyapunov(const std::vector<Potential>& phases, double energy);

struct ZSetScan {
    std::vector<double> grid;
    std::vector<double> gamma;
    std::vector<double> spread;
    IntervalSet set;  // grid cells of the points with gamma < tol
    double tol = 0;
    Index n = 0;
};

/// Marks grid points with gamma < tol; each marked point stands for the cell
/// between the midpoints to its neighbours (half a spacing at the ends).
ZSetScan zset_scan(const Model& model, const std::vector<double>& grid, Index n, double tol,
                   int phase_samples = 1);

struct SpectrumApprox {
    int k = 0;
    IntervalSet set;      // sigma_k U sigma_{k+1}
    double measure = 0;
    int band_count = 0;   // intervals after merging
    bool monotone = true; // set lies in sigma_{k-1} U sigma_k widened by tol
    double tol = 0;
};

/// sigma_k U sigma_{k+1} for coefficients cf (depth >= k+1), k >= 1.
SpectrumApprox spectrum_approx(double lambda, const ContinuedFraction& cf, int k, double tol = 1e-8);
/// Golden mean (Fibonacci) model.
SpectrumApprox spectrum_approx(double lambda, int k, double tol = 1e-8);

struct BoxDimension {
    double dimension = 0;  // slope of log N(eps) against log(1/eps)
    double residual = 0;
    std::vector<double> scales;
    std::vector<Index> counts;
    bool degenerate = false;  // empty set, or a single box at every scale
};

/// Needs >= 4 scales spanning >= 2 decades.
BoxDimension box_dimension(const IntervalSet& set, const std::vector<double>& scales);

/// `count` scales from diameter/4 down to `finest`, geometric.
std::vector<double> box_scales(const IntervalSet& set, double finest, int count = 10);

}  // namespace qcs
