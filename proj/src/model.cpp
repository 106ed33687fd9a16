#include "qcspec/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qcs {

Model Model::free() { return Model{}; }

Model Model::constant(double c) {
    Model m;
    m.kind = Kind::Constant;
    m.name = "constant";
    m.lambda = c;
    return m;
}

Model Model::periodic(std::vector<double> pattern, double lambda) {
    if (pattern.empty()) throw InvalidArgument("periodic model needs a non-empty pattern");
    Model m;
    m.kind = Kind::Periodic;
    m.name = "periodic";
    m.lambda = lambda;
    m.pattern = std::move(pattern);
    return m;
}

Model Model::from_preset(const Preset& p, double lambda) {
    Model m;
    m.kind = p.substitution ? Kind::Substitution : Kind::Sturmian;
    m.name = p.name;
    m.lambda = lambda;
    m.preset = p;
    for (const auto& label : p.alphabet().labels()) {
        try {
            m.symbol_values.push_back(std::stod(label));
        } catch (const std::exception&) {
            throw InvalidArgument(p.name + ": symbol '" + label + "' is not numeric; set symbol_values");
        }
    }
    return m;
}

Model Model::sturmian(std::vector<std::int64_t> cf_pattern, double lambda, double phi) {
    if (cf_pattern.empty()) throw InvalidArgument("sturmian model needs coefficients");
    for (auto a : cf_pattern)
        if (a < 1) throw InvalidArgument("continued fraction coefficients must be >= 1");
    Preset p;
    p.name = "sturmian";
    p.sturmian = SturmianPreset{std::move(cf_pattern), phi};
    return from_preset(p, lambda);
}

Model Model::random_signs(double lambda, std::uint64_t seed) {
    Model m;
    m.kind = Kind::Random;
    m.name = "random";
    m.lambda = lambda;
    m.seed = seed;
    return m;
}

Potential Model::potential(Index first, Index last, int phase, int phases) const {
    if (last < first) throw InvalidArgument("empty range");
    if (phases < 1 || phase < 0 || phase >= phases) throw InvalidArgument("phase out of range");
    const auto len = static_cast<std::size_t>(last - first);
    Potential v{first, std::vector<double>(len, 0.0)};
    switch (kind) {
    case Kind::Free:
        break;
    case Kind::Constant:
        std::fill(v.values.begin(), v.values.end(), lambda);
        break;
    case Kind::Periodic: {
        const auto p = static_cast<Index>(pattern.size());
        for (std::size_t i = 0; i < len; ++i) {
            Index r = (first + static_cast<Index>(i) + phase) % p;
            if (r < 0) r += p;
            v.values[i] = lambda * pattern[static_cast<std::size_t>(r)];
        }
        break;
    }
    case Kind::Random: {
        // raw engine bits: the sequence is fixed by the standard
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(phase));
        for (std::size_t i = 0; i < len; ++i) v.values[i] = (rng() >> 63) ? lambda : -lambda;
        break;
    }
    case Kind::Sturmian:
    case Kind::Substitution: {
        const Window w = window(first, last, phase, phases);
        for (std::size_t i = 0; i < len; ++i) v.values[i] = lambda * symbol_values[w.symbols[i]];
        break;
    }
    }
    return v;
}

Window Model::window(Index first, Index last, int phase, int phases) const {
    if (!symbolic()) throw InvalidArgument(name + " is not a symbolic model");
    if (last < first) throw InvalidArgument("empty range");
    if (phases < 1 || phase < 0 || phase >= phases) throw InvalidArgument("phase out of range");
    if (kind == Kind::Sturmian) {
        const auto& s = *preset->sturmian;
        double phi = s.phi + static_cast<double>(phase) / phases;
        phi -= std::floor(phi);
        const Index m = std::max(std::abs(first), std::abs(last));
        return sturmian_window(sturmian_params(s.cf_pattern, phi, m), first, last);
    }
    const Index offset = std::max<Index>(0, -first) + static_cast<Index>(phase) * stride;
    Window w = preset_window(*preset, first + offset, last + offset);
    w.start = first;
    return w;
}

double Model::sup_bound() const {
    double m = 0;
    switch (kind) {
    case Kind::Free:
        return 0;
    case Kind::Constant:
    case Kind::Random:
        return std::abs(lambda);
    case Kind::Periodic:
        for (double p : pattern) m = std::max(m, std::abs(p));
        return std::abs(lambda) * m;
    default:
        for (double s : symbol_values) m = std::max(m, std::abs(s));
        return std::abs(lambda) * m;
    }
}

std::optional<std::vector<std::int64_t>> Model::cf_pattern() const {
    if (kind == Kind::Sturmian) return preset->sturmian->cf_pattern;
    // the Fibonacci substitution generates the golden-mean Sturmian sequence
    if (kind == Kind::Substitution && preset->name == "fibonacci") return std::vector<std::int64_t>{1};
    return std::nullopt;
}

Model make_model(const std::string& name, double lambda, const Catalog& catalog, std::uint64_t seed,
                 const std::vector<std::int64_t>& cf, double phi) {
    if (name == "free") return Model::free();
    if (name == "constant") return Model::constant(lambda);
    if (name == "random") return Model::random_signs(lambda, seed);
    if (name == "sturmian") return Model::sturmian(cf, lambda, phi);
    if (!catalog.contains(name)) throw InvalidArgument("unknown model '" + name + "'");
    Model m = Model::from_preset(catalog.at(name), lambda);
    if (m.kind == Model::Kind::Sturmian && phi != 0.0) m.preset->sturmian->phi = phi;
    return m;
}

}  // namespace qcs
