#pragma once

// Finite sections of H on a lattice interval with hard truncation, and their
// full eigendecomposition.

#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/Core>

#include "qcspec/model.hpp"
#include "qcspec/schrodinger.hpp"

namespace qcs {

/// Eigenvalues ascending; column j of `vectors` is the normalized eigenvector
/// of values(j), indexed by lattice position.
struct Eigensystem {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

/// Symmetric tridiagonal matrix with diagonal V(n), first <= n <= last, and
/// off-diagonal ones.  Copies share the cached eigensystem.
class LatticeOperator {
public:
    LatticeOperator() : LatticeOperator(Potential{0, {0.0}}) {}
    explicit LatticeOperator(Potential v);
    /// Sites -L..L of a model.
    static LatticeOperator centered(const Model& model, Index L, int phase = 0, int phases = 1);

    Index first() const { return v_.start; }
    Index last() const { return v_.end() - 1; }
    Index size() const { return static_cast<Index>(v_.values.size()); }
    bool contains(Index n) const { return n >= first() && n <= last(); }
    /// Row of site n.
    Index row(Index n) const;
    const Potential& potential() const { return v_; }
    const std::vector<double>& diagonal() const { return v_.values; }
    /// 2 + max |V|; the spectrum lies in [-bound, bound].
    double spectral_bound() const;

    /// Computed once per operator (and its copies).
    const Eigensystem& eigensystem() const;

    /// H x for a vector indexed by row.
    template <class Derived>
    auto apply(const Eigen::MatrixBase<Derived>& x) const {
        using Scalar = typename Derived::Scalar;
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1> y(x.size());
        const Index m = size();
        for (Index i = 0; i < m; ++i) {
            Scalar s = v_.values[static_cast<std::size_t>(i)] * x(i);
            if (i > 0) s += x(i - 1);
            if (i + 1 < m) s += x(i + 1);
            y(i) = s;
        }
        return y;
    }

private:
    struct Cache {
        std::once_flag once;
        Eigensystem es;
    };
    Potential v_;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// Eigenvalues and eigenvectors of the symmetric tridiagonal matrix with
/// diagonal d and off-diagonal e (|e| = |d| - 1).
Eigensystem tridiagonal_eigensystem(const std::vector<double>& d, const std::vector<double>& e);

}  // namespace qcs
