#ifndef STEFAN_CONFIG_HPP
#define STEFAN_CONFIG_HPP

#include "stefan/reference_fd.hpp"
#include "stefan/stefan_ie.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace stefan {

// Flat `key = value` configuration with `#` comments and dotted section
// prefixes. Unknown keys, duplicate keys and malformed values are rejected
// with the offending line number (CLI exit code 2).
struct CliConfig {
    // problem
    double beta1 = 0.0, beta2 = 0.0, b_bar = 0.0, b = 0.0;
    BoundaryLaw law = BoundaryLaw::frozen_h;
    // profile source
    std::string profile_kind = "front"; // front | cosine | file
    std::string profile_path;
    double profile_z_min = 0.0; // resolved from b_bar - solver.z_tail when absent
    double profile_h = 1e-3;
    double profile_left = -5.0;
    std::string physical_path;
    // solver
    SolverConfig solver;
    // snapshots (solve/fd commands)
    std::vector<double> snapshot_times;
    double snapshot_z_min = 0.0; // defaults to profile_z_min
    int snapshot_n = 400;
    bool snapshot_parametric = true;
    // fd
    FdConfig fd;
    // certify
    double certify_b2 = 0.0; // defaults to 1/(2 sqrt(pi) b_bar)
    int certify_trials = 100;
    int contraction_steps = 64;
    bool run_contraction = true;
    // convergence
    std::vector<double> convergence_dts{4e-3, 2e-3, 1e-3};
    bool convergence_tie_profile = true;
    // oracle
    double oracle_snapshot_t = -1.0; // defaults to solver.t_end
    // compare
    std::string compare_a, compare_b;

    // resolved key=value echo (defaults included), insertion-ordered
    std::vector<std::pair<std::string, std::string>> resolved;
};

CliConfig parse_config(const std::string& path);

// FNV-1a over the resolved echo; stable across reruns of the same config.
std::string config_hash(const CliConfig& cfg, std::uint64_t seed);

struct RunManifest {
    std::string command; // solve | oracle | certify | fd | compare | convergence
    std::string config_path;
    std::string output_dir;
    std::uint64_t seed = 0;
};

// Returns the process exit code: 0 success, 1 numerical failure (partial
// outputs carry a .partial suffix), 2 configuration error.
int run(const RunManifest& manifest);

} // namespace stefan

#endif
