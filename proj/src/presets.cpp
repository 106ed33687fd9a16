#include "qcspec/presets.hpp"

#include <fstream>

namespace qcs {

namespace {

const char* const kBuiltin = R"json({
  "schema_version": 1,
  "presets": {
    "fibonacci": {
      "kind": "substitution",
      "alphabet": ["0", "1"],
      "rules": {"0": "1", "1": "10"},
      "seed": "1",
      "sturmian_equivalent": "golden_sturmian"
    },
    "thue_morse": {
      "kind": "substitution",
      "alphabet": ["0", "1"],
      "rules": {"0": "01", "1": "10"},
      "seed": "1"
    },
    "period_doubling": {
      "kind": "substitution",
      "alphabet": ["0", "1"],
      "rules": {"0": "11", "1": "10"},
      "seed": "1"
    },
    "rudin_shapiro": {
      "kind": "substitution",
      "alphabet": ["1", "2", "3", "4"],
      "rules": {"1": "12", "2": "13", "3": "42", "4": "43"},
      "seed": "1"
    },
    "tribonacci": {
      "kind": "substitution",
      "alphabet": ["1", "2", "3"],
      "rules": {"1": "12", "2": "13", "3": "1"},
      "seed": "1"
    },
    "golden_sturmian": {
      "kind": "sturmian",
      "cf_pattern": [1],
      "phi": 0.0
    },
    "silver_sturmian": {
      "kind": "sturmian",
      "cf_pattern": [2],
      "phi": 0.0
    }
  }
}
)json";

}  // namespace

const std::string& builtin_catalog_text() {
    static const std::string text(kBuiltin);
    return text;
}

const Alphabet& Preset::alphabet() const {
    static const Alphabet binary = Alphabet::numeric(2);
    return substitution ? substitution->substitution.alphabet() : binary;
}

Catalog Catalog::builtin() { return from_json(nlohmann::json::parse(builtin_catalog_text())); }

Catalog Catalog::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open model catalog " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(path + ": " + e.what());
    }
    return from_json(j);
}

Catalog Catalog::from_json(const nlohmann::json& j) {
    Catalog c;
    c.json_ = j;
    if (!j.contains("presets") || !j["presets"].is_object()) throw InvalidArgument("catalog has no \"presets\" object");
    for (const auto& [name, spec] : j["presets"].items()) {
        Preset p;
        p.name = name;
        const std::string kind = spec.value("kind", "");
        if (kind == "substitution") {
            Alphabet a(spec.at("alphabet").get<std::vector<std::string>>());
            std::vector<std::string> images;
            for (const auto& l : a.labels()) {
                if (!spec.at("rules").contains(l)) throw InvalidArgument(name + ": no rule for symbol " + l);
                images.push_back(spec["rules"][l].get<std::string>());
            }
            Substitution s = Substitution::from_rules(a, images);
            p.substitution = SubstitutionPreset{s, a.index_of(spec.at("seed").get<std::string>())};
        } else if (kind == "sturmian") {
            p.sturmian = SturmianPreset{spec.at("cf_pattern").get<std::vector<std::int64_t>>(), spec.value("phi", 0.0)};
        } else {
            throw InvalidArgument(name + ": unknown preset kind \"" + kind + "\"");
        }
        c.presets_.push_back(std::move(p));
    }
    return c;
}

const Preset& Catalog::at(const std::string& name) const {
    for (const auto& p : presets_)
        if (p.name == name) return p;
    throw InvalidArgument("unknown model preset \"" + name + "\"");
}

bool Catalog::contains(const std::string& name) const {
    for (const auto& p : presets_)
        if (p.name == name) return true;
    return false;
}

std::vector<std::string> Catalog::names() const {
    std::vector<std::string> out;
    for (const auto& p : presets_) out.push_back(p.name);
    return out;
}

SturmianParams sturmian_params(const std::vector<std::int64_t>& pattern, double phi, Index max_abs_index,
                               EndpointConvention variant) {
    // q_K well beyond 10^8 (|n|+1) leaves margin for the certification test.
    const BigInt target = BigInt(100000000) * BigInt(max_abs_index + 1);
    int depth = 2;
    while (true) {
        ContinuedFraction cf = ContinuedFraction::periodic(pattern, depth);
        if (cf.q(depth) > target) return SturmianParams(cf, phi, variant);
        depth += 4;
    }
}

Window preset_window(const Preset& p, Index first, Index last) {
    if (last < first) throw InvalidArgument("empty range");
    if (p.substitution) {
        if (first < 0) throw InvalidArgument(p.name + ": substitution fixed points are one-sided (first >= 0)");
        Window w = substitution_fixed_point(p.substitution->substitution, p.substitution->seed, last);
        return w.slice(first, last);
    }
    const Index m = std::max(std::abs(first), std::abs(last));
    return sturmian_window(sturmian_params(p.sturmian->cf_pattern, p.sturmian->phi, m), first, last);
}

}  // namespace qcs
