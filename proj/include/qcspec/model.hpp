#pragma once

// Potential families V(n) used by the spectral and dynamical tools.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcspec/presets.hpp"
#include "qcspec/schrodinger.hpp"

namespace qcs {

/// V(n) = lambda * value(symbol at n) for a symbolic model; the free,
/// constant and random families have no symbolic window.
///
/// Phases: a model is sampled at `phase` out of `phases` points of its hull.
///   Sturmian      phi + phase/phases (mod 1)
///   Substitution  read from the one-sided fixed point at n + offset, offset
///                 = max(0, -first) + phase * stride
///   Periodic      shift by phase
///   Random        seed + phase
struct Model {
    enum class Kind { Free, Constant, Periodic, Sturmian, Substitution, Random };

    Kind kind = Kind::Free;
    std::string name = "free";
    double lambda = 0.0;
    std::vector<double> pattern;                 // Periodic: one period of V / lambda
    std::optional<Preset> preset;                // Sturmian / Substitution
    std::vector<double> symbol_values;           // per symbol index; empty = numeric labels
    std::uint64_t seed = 1;                      // Random
    Index stride = 7919;                         // Substitution phase offset step

    static Model free();
    static Model constant(double c);
    static Model periodic(std::vector<double> pattern, double lambda);
    /// Catalog preset; V(n) = lambda * label(s_n) unless symbol_values is set.
    static Model from_preset(const Preset& p, double lambda);
    /// Sturmian model with an eventually periodic coefficient pattern.
    static Model sturmian(std::vector<std::int64_t> cf_pattern, double lambda, double phi = 0.0);
    /// V(n) = +-lambda, independent fair signs.
    static Model random_signs(double lambda, std::uint64_t seed);

    bool symbolic() const { return kind == Kind::Sturmian || kind == Kind::Substitution; }
    /// Symbol window of a Sturmian or substitution model at the given phase.
    Window window(Index first, Index last, int phase = 0, int phases = 1) const;
    Potential potential(Index first, Index last, int phase = 0, int phases = 1) const;
    /// Upper bound for sup |V|.
    double sup_bound() const;
    /// Coefficients when this is a Sturmian model (golden mean for "fibonacci").
    std::optional<std::vector<std::int64_t>> cf_pattern() const;
};

/// Model by name: "free", "constant", "random", a catalog preset, or
/// "sturmian" with explicit coefficients.
Model make_model(const std::string& name, double lambda, const Catalog& catalog = Catalog::builtin(),
                 std::uint64_t seed = 1, const std::vector<std::int64_t>& cf = {}, double phi = 0.0);

}  // namespace qcs
