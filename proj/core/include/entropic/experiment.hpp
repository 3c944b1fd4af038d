#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entropic/analysis.hpp"
#include "entropic/space.hpp"

namespace entropic {

/// Marginal presets: uniform | gaussian-bump | two-bumps | indicator | file.
/// Bump centers are axis coordinates on grids and a node id on graphs; an
/// additive uniform floor keeps bump marginals strictly positive.
struct MarginalSpec {
    std::string preset = "uniform";
    std::vector<double> center;
    std::vector<double> center2;
    double width = 0.1;
    double floor = 0.0;
    std::vector<int> nodes;  // indicator support
    std::string path;        // file preset: one value per line
};

struct SpaceSpec {
    std::string kind = "torus-grid";  // or weighted-graph
    int dims = 1;
    int resolution = 64;
    std::vector<double> side_lengths = {1.0};
    std::string graph_csv;           // edge list: i, j, conductance, length
    std::vector<double> measure;     // per-node weights (graphs; empty = uniform)
    int max_nodes = kDefaultMaxNodes;
};

struct ExperimentConfig {
    SpaceSpec space;
    MarginalSpec rho0, rho1;
    std::vector<double> epsilons = {0.4, 0.2, 0.1, 0.05, 0.02};
    int time_steps = 200;
    double delta = 0.05;
    double tol = 1e-10;
    int max_iter = 100000;
    bool log_floor = false;
    bool lp_enabled = true;
    int lp_limit = kDefaultLpLimit;
    int test_basis = 8;
    std::vector<std::string> checks;  // enabled gate checks (see run_experiment)
    std::string output_dir = "out";
    std::string raw_text;  // config file body, echoed into report.json
};

/// Parses the JSON experiment description; throws Error("invalid-config")
/// on malformed input. Field constraints are reported by validate_config.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

/// Every violated constraint, one message per field; empty means runnable.
std::vector<std::string> validate_config(const ExperimentConfig& config);

Space build_space(const SpaceSpec& spec);
Density build_marginal(const Space& space, const MarginalSpec& spec);

/// Smooth bandlimited observable used by the second-order report (grids).
ScalarField observable_field(const Space& space);

struct RunOptions {
    std::string output_dir_override;
    int threads = 1;
    std::uint64_t seed = 0;
};

/// Runs the full pipeline and writes report.json, sweep.csv and one
/// path_<eps>.csv per epsilon into the output directory. Returns the
/// process exit status: 0 on success, 1 when a solver fails to converge or
/// an enabled check fails, 2 on configuration errors.
int run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Shortest round-trip decimal representation (bit-stable CSV bodies).
std::string format_double(double value);

}  // namespace entropic
