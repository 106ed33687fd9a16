#include "qcspec/lattice.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

namespace qcs {

LatticeOperator::LatticeOperator(Potential v) : v_(std::move(v)) {
    if (v_.values.empty()) throw InvalidArgument("lattice operator needs at least one site");
    for (double x : v_.values)
        if (!std::isfinite(x)) throw InvalidArgument("potential must be finite");
}

LatticeOperator LatticeOperator::centered(const Model& model, Index L, int phase, int phases) {
    if (L < 0) throw InvalidArgument("lattice half-width must be >= 0");
    return LatticeOperator(model.potential(-L, L + 1, phase, phases));
}

Index LatticeOperator::row(Index n) const {
    if (!contains(n)) throw InvalidArgument("site " + std::to_string(n) + " outside the lattice");
    return n - first();
}

double LatticeOperator::spectral_bound() const { return 2.0 + v_.sup_norm(); }

const Eigensystem& LatticeOperator::eigensystem() const {
    std::call_once(cache_->once, [&] {
        cache_->es = tridiagonal_eigensystem(v_.values, std::vector<double>(v_.values.size() - 1, 1.0));
    });
    return cache_->es;
}

Eigensystem tridiagonal_eigensystem(const std::vector<double>& d, const std::vector<double>& e) {
    const auto n = static_cast<lapack_int>(d.size());
    if (n == 0) throw InvalidArgument("empty matrix");
    if (e.size() + 1 != d.size()) throw InvalidArgument("off-diagonal must have one entry less");
    std::vector<double> dd = d;
    std::vector<double> ee(e.begin(), e.end());
    ee.push_back(0.0);  // dstemr uses e[n-1] as workspace
    Eigensystem out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    lapack_logical tryrac = 1;
    const lapack_int info =
        LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'A', n, dd.data(), ee.data(), 0.0, 0.0, 0, 0, &found,
                       out.values.data(), out.vectors.data(), n, n, support.data(), &tryrac);
    if (info == 0 && found == n) return out;
    // MRRR can fail on tight clusters (strong disorder); divide and conquer is robust
    dd = d;
    ee.assign(e.begin(), e.end());
    const lapack_int info2 = LAPACKE_dstevd(LAPACK_COL_MAJOR, 'V', n, dd.data(), ee.data(), out.vectors.data(), n);
    if (info2 != 0)
        throw Error("tridiagonal eigensolver failed (info " + std::to_string(info) + ", " + std::to_string(info2) + ")");
    out.values = Eigen::Map<const Eigen::VectorXd>(dd.data(), n);
    return out;
}

}  // namespace qcs
