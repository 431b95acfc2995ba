#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "epsim/dynamics.hpp"

namespace epsim {

// Resolved experiment configuration; serializes losslessly to manifest.json,
// and a manifest is itself a runnable config.
struct RunConfig {
    std::string experiment;  // spectrum|evolve|permute|group|sweep|stiffness|dilate|betadyne

    SystemConfig system;
    ModulationSchedule schedule;  // schedule.config mirrors `system`

    long steps = 200000;
    int samples = 1000;
    double threshold = 0.9;
    double epsilon = 0.0;
    int threads = 1;

    // spectrum
    double x_min = -2.0, x_max = 2.0, y_min = 0.0, y_max = 2.0;
    int resolution = 101;
    double couplings_scale = 1.0;

    // evolve
    int initial_state_index = 1;  // 1-based eigenstate label

    // group
    std::vector<std::string> generators;
    std::size_t closure_cap = 1000000;
    std::size_t find_normal_order = 0;  // 0 = off

    // sweep
    std::vector<double> sweep_epsilons;
    std::vector<int> sweep_directions;

    // stiffness
    double circle_radius = 1.0;
    double ellipse_r_x = 3.0;
    double ellipse_r_y = 6.0;

    // dilate / betadyne
    double point_x = 0.6, point_y = 0.8;
    double segment_fraction = 0.25;
    long segment_steps = 20000;
    double gamma = 2.0;

    std::string output_directory = "out";
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);
nlohmann::json run_config_json(const RunConfig& config);

// Checks invariants (ranges, EP clearance) without running; returns
// human-readable diagnostics. Throws ConfigError on violations.
std::vector<std::string> validate_run_config(const RunConfig& config);

// Dispatches the experiment and writes the artifacts plus manifest.json into
// the output directory. Returns the artifact file names.
std::vector<std::string> run_experiment(const RunConfig& config);

}  // namespace epsim
