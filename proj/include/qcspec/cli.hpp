#pragma once

// Command-line driver: qcspec <command> [flags] [--config file.json].
// Values in the JSON config override flags.  Every run writes its CSV
// artifacts and a manifest.json into the output directory.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qcspec/common.hpp"

namespace qcs {

struct RunConfig {
    std::string command;

    // model
    std::string model = "fibonacci";
    double lambda = 1.0;
    double theta = 0.0;                 // 0: unset; otherwise Sturmian with this slope
    std::vector<std::int64_t> cf;       // Sturmian coefficient pattern
    double phi = 0.0;
    std::uint64_t seed = 1;
    std::string catalog;                // extra presets (JSON file)

    // generate / words
    Index first = 0;
    Index length = 64;
    int complexity = 32;

    // spectrum
    int k = 12;
    bool zset = false;
    double emin = -3.0, emax = 3.0;
    int points = 2001;
    Index n = 10000;
    double tol = 2e-3;
    int phases = 1;
    bool box = false;

    // trace
    std::vector<double> energies;
    int kmax = 30;
    bool audit = false;

    // dynamics
    Index L = 1024;
    double tmin = 10, tmax = 1000;
    int tpoints = 9;
    std::vector<double> p{1, 2};

    // cmv
    std::vector<double> alpha{0.3, 0.7};  // per-symbol values
    std::vector<double> alpha_im;         // optional imaginary parts
    std::vector<Index> sizes{128, 256, 512, 1024};
    std::vector<double> eps;              // empty: 2 pi / 256

    // compare
    std::vector<std::string> files;

    std::string out = ".";
    int workers = 0;  // 0: QCSPEC_WORKERS or hardware
};

class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Overrides fields from a JSON object; errors name the file and line.
void apply_config_json(RunConfig& c, const std::string& text, const std::string& source);
void validate(const RunConfig& c);

/// Runs a validated config.  Returns the exit status.
int run(const RunConfig& c, std::ostream& out);

/// Parses argv and runs.  0 on success, 1 when compare finds differences,
/// 2 on errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qcs
