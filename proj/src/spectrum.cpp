#include "qcspec/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "qcspec/fit.hpp"
#include "qcspec/parallel.hpp"

namespace qcs {

LyapunovEstimate lyapunov(const std::vector<Potential>& phases, double energy) {
    if (phases.empty()) throw InvalidArgument("lyapunov needs at least one phase");
    LyapunovEstimate out;
    out.energy = energy;
    out.n = static_cast<Index>(phases.front().values.size());
    out.phases = static_cast<int>(phases.size());
    double lo = INFINITY, hi = -INFINITY, sum = 0;
    for (const auto& v : phases) {
        if (static_cast<Index>(v.values.size()) != out.n) throw InvalidArgument("phases of different lengths");
        const auto a = transfer_product<double>(v, energy, v.start, v.end());
        const double g = a.log_norm() / static_cast<double>(out.n);
        lo = std::min(lo, g);
        hi = std::max(hi, g);
        sum += g;
    }
    out.gamma = std::max(0.0, sum / static_cast<double>(phases.size()));
    out.spread = hi - lo;
    return out;
}

namespace {

std::vector<Potential> sample_phases(const Model& model, Index n, int phase_samples) {
    if (n < 100) throw InvalidArgument("lyapunov needs n >= 100");
    if (phase_samples < 1) throw InvalidArgument("lyapunov needs phase_samples >= 1");
    std::vector<Potential> out;
    for (int j = 0; j < phase_samples; ++j) out.push_back(model.potential(0, n, j, phase_samples));
    return out;
}

}  // namespace

LyapunovEstimate lyapunov(const Model& model, double energy, Index n, int phase_samples) {
    return lyapunov(sample_phases(model, n, phase_samples), energy);
}

ZSetScan zset_scan(const Model& model, const std::vector<double>& grid, Index n, double tol, int phase_samples) {
    if (grid.empty()) throw InvalidArgument("zset_scan: empty energy grid");
    if (!std::is_sorted(grid.begin(), grid.end())) throw InvalidArgument("zset_scan: grid must be sorted");
    if (!(tol > 0)) throw InvalidArgument("zset_scan: tol must be positive");
    const auto phases = sample_phases(model, n, phase_samples);
    ZSetScan out;
    out.grid = grid;
    out.tol = tol;
    out.n = n;
    out.gamma.resize(grid.size());
    out.spread.resize(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const auto est = lyapunov(phases, grid[i]);
        out.gamma[i] = est.gamma;
        out.spread[i] = est.spread;
    });
    std::vector<Interval> cells;
    const std::size_t m = grid.size();
    for (std::size_t i = 0; i < m; ++i) {
        if (!(out.gamma[i] < tol)) continue;
        const double left_gap = i > 0 ? grid[i] - grid[i - 1] : (m > 1 ? grid[1] - grid[0] : 0.0);
        const double right_gap = i + 1 < m ? grid[i + 1] - grid[i] : left_gap;
        cells.push_back({grid[i] - 0.5 * left_gap, grid[i] + 0.5 * right_gap});
    }
    out.set = IntervalSet(std::move(cells));
    return out;
}

SpectrumApprox spectrum_approx(double lambda, const ContinuedFraction& cf, int k, double tol) {
    if (k < 1) throw InvalidArgument("spectrum_approx needs k >= 1");
    if (cf.depth() < k + 1) throw InvalidArgument("spectrum_approx needs coefficients up to k+1");
    const auto prev = sigma_k(lambda, cf, k - 1);
    const auto cur = sigma_k(lambda, cf, k);
    const auto next = sigma_k(lambda, cf, k + 1);
    SpectrumApprox out;
    out.k = k;
    out.tol = tol;
    out.set = cur.bands.unite(next.bands);
    out.measure = out.set.measure();
    out.band_count = static_cast<int>(out.set.size());
    out.monotone = out.set.subset_of(prev.bands.unite(cur.bands), tol);
    return out;
}

SpectrumApprox spectrum_approx(double lambda, int k, double tol) {
    return spectrum_approx(lambda, ContinuedFraction::periodic({1}, k + 1), k, tol);
}

BoxDimension box_dimension(const IntervalSet& set, const std::vector<double>& scales) {
    if (scales.size() < 4) throw InvalidArgument("box_dimension needs at least 4 scales");
    for (double s : scales)
        if (!(s > 0)) throw InvalidArgument("box_dimension: scales must be positive");
    const auto [lo, hi] = std::minmax_element(scales.begin(), scales.end());
    if (*hi / *lo < 100.0 * (1 - 1e-12)) throw InvalidArgument("box_dimension: scales must span two decades");
    BoxDimension out;
    out.scales = scales;
    std::vector<double> x, y;
    for (double eps : scales) {
        const Index n = set.box_count(eps);
        out.counts.push_back(n);
        x.push_back(std::log(1.0 / eps));
        y.push_back(std::log(static_cast<double>(std::max<Index>(n, 1))));
    }
    out.degenerate = set.empty() || std::all_of(out.counts.begin(), out.counts.end(), [](Index n) { return n <= 1; });
    if (out.degenerate) return out;
    const auto fit = least_squares(x, y);
    out.dimension = fit.slope;
    out.residual = fit.residual;
    return out;
}

std::vector<double> box_scales(const IntervalSet& set, double finest, int count) {
    if (set.empty()) throw InvalidArgument("box_scales: empty set");
    const double diameter = set.intervals().back().right - set.intervals().front().left;
    const double coarsest = diameter / 4;
    if (!(finest > 0) || !(finest < coarsest)) throw InvalidArgument("box_scales: finest scale out of range");
    return log_space(coarsest, finest, count);
}

}  // namespace qcs
