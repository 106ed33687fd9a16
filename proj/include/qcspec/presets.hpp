#pragma once

// Named sequence models: substitution fixed points and Sturmian codings.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qcspec/generators.hpp"

namespace qcs {

struct SubstitutionPreset {
    Substitution substitution;
    Symbol seed = 0;
};

struct SturmianPreset {
    std::vector<std::int64_t> cf_pattern;
    double phi = 0.0;
};

struct Preset {
    std::string name;
    std::optional<SubstitutionPreset> substitution;
    std::optional<SturmianPreset> sturmian;
    const Alphabet& alphabet() const;
};

class Catalog {
public:
    /// The presets compiled into the library (same content as data/models.json).
    static Catalog builtin();
    static Catalog from_json(const nlohmann::json& j);
    static Catalog from_file(const std::string& path);

    const Preset& at(const std::string& name) const;
    bool contains(const std::string& name) const;
    std::vector<std::string> names() const;
    const nlohmann::json& json() const { return json_; }

private:
    std::vector<Preset> presets_;
    nlohmann::json json_;
};

const std::string& builtin_catalog_text();

/// Sturmian parameters from a periodic coefficient pattern, deep enough that
/// indices with |n| <= max_abs_index are normally certified.
SturmianParams sturmian_params(const std::vector<std::int64_t>& pattern, double phi, Index max_abs_index,
                               EndpointConvention variant = EndpointConvention::LeftClosed);

/// Window [first, last) of a preset.  Substitution presets are one-sided and
/// need first >= 0.
Window preset_window(const Preset& p, Index first, Index last);

}  // namespace qcs
