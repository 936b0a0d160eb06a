#pragma once
// Run configuration: a flat key = value file, one key per line, '#' comments.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "kdvnf/errors.hpp"

namespace kdvnf {

inline constexpr const char* artifact_version = "0.1.0";

inline const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> s = {"trees", "verify", "gauge", "solve", "equiv", "estimate", "illposed"};
    return s;
}

struct RunConfig {
    std::string subcommand;
    std::uint64_t seed = 0;
    std::string output_dir = "kdvnf_out";

    // Grid and dynamics.
    int N = 32;
    double h = 0.25;
    double dt = 1e-3;
    double t_final = 0.5;
    int J = 3;
    double cstar = 0.1;
    double delta = 0.02;
    int checkpoints = 10;
    std::string rhs = "kdv";        // solve: kdv | gkdv
    std::string initial = "smooth"; // solve/gauge: smooth | soliton | <csv path>
    double speed = 4.0;             // soliton speed

    // Verification.
    int j_max = 5;
    int trials = 20;

    // Gauge.
    std::string direction = "forward";
    std::string region = "paper";

    // Estimates and ill-posedness.
    std::string weight = "bilinear_full";
    double s = -0.2;
    double p = std::numeric_limits<double>::infinity();
    std::string experiment = "picard3";  // illposed: picard3 | miura
    int outer_points = 256;

    // Keys set explicitly (file or command line), for the manifest.
    std::set<std::string> explicit_keys;

    void validate() const;
};

// Names accepted in configuration files.
const std::vector<std::string>& config_keys();

// Assigns one textual value; throws ValidationError naming the key.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

RunConfig parse_config(std::istream& is, bool validate = true);
RunConfig load_config(const std::string& path, bool validate = true);

}  // namespace kdvnf
