#include "epsim/run_config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "epsim/betadyne.hpp"
#include "epsim/dilation.hpp"
#include "epsim/errors.hpp"
#include "epsim/io.hpp"
#include "epsim/spectral.hpp"

namespace epsim {

namespace {

const std::set<std::string> kExperiments = {"spectrum", "evolve", "permute",  "group",
                                            "sweep",    "stiffness", "dilate", "betadyne"};

template <typename T>
T get_or(const nlohmann::json& j, const std::string& key, T fallback) {
    if (j.contains(key)) return j.at(key).get<T>();
    return fallback;
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& j) {
    RunConfig cfg;
    if (!j.contains("experiment")) throw ConfigError("config: missing 'experiment'");
    cfg.experiment = j.at("experiment").get<std::string>();
    if (!kExperiments.count(cfg.experiment))
        throw ConfigError("config: unknown experiment '" + cfg.experiment + "'");

    if (!j.contains("system")) throw ConfigError("config: missing 'system'");
    const auto& sys = j.at("system");
    const int n = get_or<int>(sys, "n_qubits", 1);
    std::vector<double> scales =
        get_or<std::vector<double>>(sys, "field_scales", std::vector<double>(std::max(n, 1), 1.0));
    std::vector<std::vector<double>> couplings;
    if (sys.contains("couplings")) {
        couplings = sys.at("couplings").get<std::vector<std::vector<double>>>();
    } else {
        couplings.assign(n, std::vector<double>(n, 0.0));
        std::cerr << "warning: system.couplings missing, defaulting to the zero matrix\n";
    }
    cfg.system = SystemConfig(n, std::move(scales), std::move(couplings));

    cfg.schedule.config = cfg.system;
    if (j.contains("schedule")) {
        const auto& sch = j.at("schedule");
        cfg.schedule.r_x = get_or<double>(sch, "r_x", 0.0);
        cfg.schedule.r_y = get_or<double>(sch, "r_y", 0.0);
        cfg.schedule.period = get_or<double>(sch, "period", 2500.0);
        cfg.schedule.phi_0 = get_or<double>(sch, "phi_0", M_PI);
        cfg.schedule.direction = get_or<int>(sch, "direction", 1);
        if (sch.contains("modulated_couplings"))
            for (const auto& pair : sch.at("modulated_couplings")) {
                if (!pair.is_array() || pair.size() != 2)
                    throw ConfigError("config: modulated_couplings entries must be [k, l]");
                cfg.schedule.modulated_couplings.insert(
                    {pair[0].get<int>(), pair[1].get<int>()});
            }
    }

    if (j.contains("numerics")) {
        const auto& num = j.at("numerics");
        cfg.steps = get_or<long>(num, "steps", cfg.steps);
        cfg.samples = get_or<int>(num, "samples", cfg.samples);
        cfg.threshold = get_or<double>(num, "threshold", cfg.threshold);
        cfg.epsilon = get_or<double>(num, "epsilon", cfg.epsilon);
        cfg.threads = get_or<int>(num, "threads", cfg.threads);
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        cfg.x_min = get_or<double>(g, "x_min", cfg.x_min);
        cfg.x_max = get_or<double>(g, "x_max", cfg.x_max);
        cfg.y_min = get_or<double>(g, "y_min", cfg.y_min);
        cfg.y_max = get_or<double>(g, "y_max", cfg.y_max);
        cfg.resolution = get_or<int>(g, "resolution", cfg.resolution);
        cfg.couplings_scale = get_or<double>(g, "couplings_scale", cfg.couplings_scale);
    }
    if (j.contains("evolve"))
        cfg.initial_state_index = get_or<int>(j.at("evolve"), "initial_state_index", 1);
    if (j.contains("group")) {
        const auto& g = j.at("group");
        cfg.generators = get_or<std::vector<std::string>>(g, "generators", {});
        cfg.closure_cap = get_or<std::size_t>(g, "cap", cfg.closure_cap);
        cfg.find_normal_order = get_or<std::size_t>(g, "find_normal_order", 0);
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        cfg.sweep_epsilons = get_or<std::vector<double>>(s, "epsilons", {0.0});
        cfg.sweep_directions = get_or<std::vector<int>>(s, "directions", {1, -1});
    }
    if (j.contains("stiffness")) {
        const auto& s = j.at("stiffness");
        cfg.circle_radius = get_or<double>(s, "circle_radius", cfg.circle_radius);
        cfg.ellipse_r_x = get_or<double>(s, "ellipse_r_x", cfg.ellipse_r_x);
        cfg.ellipse_r_y = get_or<double>(s, "ellipse_r_y", cfg.ellipse_r_y);
    }
    if (j.contains("dilate")) {
        const auto& d = j.at("dilate");
        cfg.point_x = get_or<double>(d, "x", cfg.point_x);
        cfg.point_y = get_or<double>(d, "y", cfg.point_y);
        cfg.segment_fraction = get_or<double>(d, "segment_fraction", cfg.segment_fraction);
        cfg.segment_steps = get_or<long>(d, "segment_steps", cfg.segment_steps);
    }
    if (j.contains("betadyne")) {
        const auto& b = j.at("betadyne");
        cfg.point_x = get_or<double>(b, "x", cfg.point_x);
        cfg.point_y = get_or<double>(b, "y", cfg.point_y);
        cfg.gamma = get_or<double>(b, "gamma", cfg.gamma);
    }
    if (j.contains("output"))
        cfg.output_directory = get_or<std::string>(j.at("output"), "directory", cfg.output_directory);
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return parse_run_config(j);
}

nlohmann::json run_config_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["experiment"] = cfg.experiment;
    j["system"] = {{"n_qubits", cfg.system.n_qubits},
                   {"field_scales", cfg.system.field_scales},
                   {"couplings", cfg.system.couplings}};
    nlohmann::json mods = nlohmann::json::array();
    for (const auto& [k, l] : cfg.schedule.modulated_couplings)
        mods.push_back(nlohmann::json::array({k, l}));
    j["schedule"] = {{"r_x", cfg.schedule.r_x},       {"r_y", cfg.schedule.r_y},
                     {"period", cfg.schedule.period}, {"phi_0", cfg.schedule.phi_0},
                     {"direction", cfg.schedule.direction}, {"modulated_couplings", mods}};
    j["numerics"] = {{"steps", cfg.steps},
                     {"samples", cfg.samples},
                     {"threshold", cfg.threshold},
                     {"epsilon", cfg.epsilon},
                     {"threads", cfg.threads}};
    if (cfg.experiment == "spectrum")
        j["grid"] = {{"x_min", cfg.x_min},           {"x_max", cfg.x_max},
                     {"y_min", cfg.y_min},           {"y_max", cfg.y_max},
                     {"resolution", cfg.resolution}, {"couplings_scale", cfg.couplings_scale}};
    if (cfg.experiment == "evolve") j["evolve"] = {{"initial_state_index", cfg.initial_state_index}};
    if (cfg.experiment == "group")
        j["group"] = {{"generators", cfg.generators},
                      {"cap", cfg.closure_cap},
                      {"find_normal_order", cfg.find_normal_order}};
    if (cfg.experiment == "sweep")
        j["sweep"] = {{"epsilons", cfg.sweep_epsilons}, {"directions", cfg.sweep_directions}};
    if (cfg.experiment == "stiffness")
        j["stiffness"] = {{"circle_radius", cfg.circle_radius},
                          {"ellipse_r_x", cfg.ellipse_r_x},
                          {"ellipse_r_y", cfg.ellipse_r_y}};
    if (cfg.experiment == "dilate")
        j["dilate"] = {{"x", cfg.point_x},
                       {"y", cfg.point_y},
                       {"segment_fraction", cfg.segment_fraction},
                       {"segment_steps", cfg.segment_steps}};
    if (cfg.experiment == "betadyne")
        j["betadyne"] = {{"x", cfg.point_x}, {"y", cfg.point_y}, {"gamma", cfg.gamma}};
    j["output"] = {{"directory", cfg.output_directory}};
    return j;
}

std::vector<std::string> validate_run_config(const RunConfig& cfg) {
    std::vector<std::string> notes;
    cfg.system.validate();
    const bool needs_schedule = cfg.experiment == "evolve" || cfg.experiment == "permute" ||
                                cfg.experiment == "sweep" || cfg.experiment == "stiffness" ||
                                cfg.experiment == "dilate";
    if (needs_schedule && cfg.experiment != "stiffness" && cfg.experiment != "dilate") {
        cfg.schedule.validate();  // includes the EP clearance rule
    } else if (needs_schedule) {
        if (cfg.experiment == "stiffness") {
            ModulationSchedule circle = cfg.schedule;
            circle.r_x = circle.r_y = cfg.circle_radius;
            circle.validate();
            ModulationSchedule ell = cfg.schedule;
            ell.r_x = cfg.ellipse_r_x;
            ell.r_y = cfg.ellipse_r_y;
            ell.validate();
        } else {
            cfg.schedule.validate();
        }
    }
    if (cfg.steps < 1) throw ConfigError("numerics.steps must be >= 1");
    if (cfg.samples < 1) throw ConfigError("numerics.samples must be >= 1");
    if (!(cfg.threshold > 0.5 && cfg.threshold <= 1.0))
        throw ConfigError("numerics.threshold must lie in (0.5, 1]");
    if (cfg.threads < 1) throw ConfigError("numerics.threads must be >= 1");
    if (cfg.experiment == "spectrum" && cfg.resolution < 2)
        throw ConfigError("grid.resolution must be >= 2");
    if (cfg.experiment == "evolve" &&
        (cfg.initial_state_index < 1 || cfg.initial_state_index > cfg.system.dim()))
        throw ConfigError("evolve.initial_state_index out of range");
    if (cfg.experiment == "betadyne" && cfg.gamma <= 0.0)
        throw ConfigError("betadyne.gamma must be positive");

    if (needs_schedule) {
        const ModulationSchedule& s = cfg.schedule;
        const double omega = 2.0 * M_PI / s.period;
        auto at = [&](double t) {
            const double theta = s.direction * omega * t + s.phi_0;
            return std::pair<double, double>{s.r_x * std::sin(theta),
                                             s.r_y * (1.0 + std::cos(theta))};
        };
        const auto [x0, y0] = at(0.0);
        const auto [xm, ym] = at(s.period / 2.0);
        notes.push_back("schedule start (" + format_double(x0) + ", " + format_double(y0) + ")");
        notes.push_back("schedule midpoint (" + format_double(xm) + ", " + format_double(ym) + ")");
        notes.push_back("EP clearance " + format_double(schedule_ep_clearance(s)));
    }
    notes.push_back("experiment " + cfg.experiment + " validated");
    return notes;
}

namespace {

std::string join_path(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

void write_manifest(const RunConfig& cfg) {
    write_json(run_config_json(cfg), join_path(cfg.output_directory, "manifest.json"));
}

std::vector<Permutation> parse_generators(const RunConfig& cfg) {
    std::vector<Permutation> gens;
    const int degree = cfg.system.dim();
    for (const auto& text : cfg.generators) gens.push_back(Permutation::parse_cycles(degree, text));
    return gens;
}

}  // namespace

std::vector<std::string> run_experiment(const RunConfig& cfg) {
    validate_run_config(cfg);
    std::filesystem::create_directories(cfg.output_directory);
    std::vector<std::string> artifacts;
    auto emit = [&](const std::string& name) {
        artifacts.push_back(name);
        return join_path(cfg.output_directory, name);
    };

    if (cfg.experiment == "spectrum") {
        const SheetGrid grid = sheet_grid(cfg.system, {cfg.x_min, cfg.x_max},
                                          {cfg.y_min, cfg.y_max}, cfg.resolution,
                                          cfg.couplings_scale, cfg.threads);
        write_sheet_grid_csv(grid, emit("sheetgrid.csv"));
    } else if (cfg.experiment == "evolve") {
        EvolveOptions opts{cfg.steps, cfg.samples, cfg.epsilon, false};
        const EigenSystem basis = initial_basis(cfg.schedule, cfg.epsilon);
        const Trajectory tr =
            evolve(cfg.schedule, basis.right_vectors[cfg.initial_state_index - 1], opts);
        write_trajectory_csv(tr, emit("trajectory.csv"));
    } else if (cfg.experiment == "permute") {
        EvolveOptions opts{cfg.steps, cfg.samples, cfg.epsilon, false};
        const EigenSystem basis = initial_basis(cfg.schedule, cfg.epsilon);
        std::vector<cvector> initials(basis.right_vectors.begin(), basis.right_vectors.end());
        const std::vector<Trajectory> trajs = evolve_many(cfg.schedule, initials, opts);
        PermutationOutcome outcome;
        const int dim = cfg.system.dim();
        outcome.mapping.resize(dim);
        outcome.confidences.resize(dim);
        for (int k = 0; k < dim; ++k) {
            const auto& fid = trajs[k].fidelities.back();
            const int arg = static_cast<int>(std::max_element(fid.begin(), fid.end()) - fid.begin());
            outcome.mapping[k] = arg + 1;
            outcome.confidences[k] = fid[arg];
            write_trajectory_csv(trajs[k], emit("trajectory_" + std::to_string(k + 1) + ".csv"));
        }
        std::vector<int> hits(dim, 0);
        bool bij = true;
        for (int v : outcome.mapping) bij = bij && (++hits[v - 1] == 1);
        double minc = *std::min_element(outcome.confidences.begin(), outcome.confidences.end());
        outcome.valid = bij && minc >= cfg.threshold;
        if (!bij) outcome.reason = "not_bijective";
        else if (minc < cfg.threshold) outcome.reason = "low_confidence";
        write_json(to_json(outcome), emit("permutation.json"));
    } else if (cfg.experiment == "group") {
        const std::vector<Permutation> gens = parse_generators(cfg);
        const GroupClosure group = closure(gens, cfg.closure_cap);
        nlohmann::json j = to_json(group);
        const TransferTable table = transfer_table(gens);
        nlohmann::json jt = nlohmann::json::array();
        for (const auto& row : table) jt.push_back(row);
        j["transfer_table"] = jt;
        if (cfg.find_normal_order > 0) {
            const auto subs = find_normal_subgroups(group, cfg.find_normal_order);
            j["normal_subgroups_of_order_" + std::to_string(cfg.find_normal_order)] = subs.size();
        }
        write_json(j, emit("group.json"));
    } else if (cfg.experiment == "sweep") {
        const std::string path = emit("sweep.csv");
        std::ofstream out(path);
        if (!out) throw IoError("cannot open for writing: " + path);
        out << "epsilon,direction,valid,cycles,min_confidence\n";
        for (double eps : cfg.sweep_epsilons) {
            for (int dir : cfg.sweep_directions) {
                ModulationSchedule s = cfg.schedule;
                s.direction = dir;
                EvolveOptions opts{cfg.steps, cfg.samples, eps, false};
                const PermutationOutcome o = extract_permutation(s, opts, cfg.threshold, cfg.threads);
                bool bij = o.reason != "not_bijective";
                out << format_double(eps) << ',' << dir << ',' << (o.valid ? 1 : 0) << ','
                    << (bij ? Permutation::from_images(o.mapping).cycle_notation() : "") << ','
                    << format_double(*std::min_element(o.confidences.begin(), o.confidences.end()))
                    << '\n';
            }
        }
    } else if (cfg.experiment == "stiffness") {
        EvolveOptions opts{cfg.steps, std::max(cfg.samples, 20000), cfg.epsilon, false};
        const StiffnessReport rep =
            stiffness_probe(cfg.system, cfg.circle_radius, {cfg.ellipse_r_x, cfg.ellipse_r_y},
                            cfg.schedule.period, opts, cfg.threads);
        nlohmann::json j;
        j["circle_oscillation"] = rep.circle_oscillation;
        j["ellipse_oscillation"] = rep.ellipse_oscillation;
        j["circle"] = to_json(rep.circle_outcome);
        j["ellipse"] = to_json(rep.ellipse_outcome);
        write_json(j, emit("stiffness.json"));
    } else if (cfg.experiment == "dilate") {
        const FieldPoint p = field_point(cfg.system, cfg.point_x, cfg.point_y);
        const DilationResult res = build_dilation(cfg.system, p);
        nlohmann::json j;
        j["hermiticity_residual"] = res.hermiticity_residual;
        j["metric_scale"] = res.metric_scale;
        j["trivial"] = res.trivial;
        j["static_metric_residual"] = static_metric_residual(cfg.system, p);
        if (cfg.schedule.r_x != 0.0 || cfg.schedule.r_y != 0.0) {
            const EigenSystem basis = initial_basis(cfg.schedule, 0.0);
            const DilatedEvolution seg = dilated_segment_evolve(
                cfg.schedule, 0.0, cfg.segment_fraction * cfg.schedule.period, cfg.segment_steps,
                basis.right_vectors[0]);
            j["segment"] = {{"max_top_block_error", seg.max_error},
                            {"max_hermiticity_residual", seg.max_hermiticity_residual},
                            {"metric_scale", seg.metric_scale}};
        }
        write_json(j, emit("dilation.json"));
    } else if (cfg.experiment == "betadyne") {
        const FieldPoint p = field_point(cfg.system, cfg.point_x, cfg.point_y);
        const BetadyneParams params = map_to_betadyne(cfg.system, p, cfg.gamma);
        nlohmann::json j = to_json(params);
        const ComplexMatrix heff = build_betadyne_nhh(params, cfg.system);
        const ComplexMatrix hspin = build_nhh(cfg.system, p);
        ComplexMatrix diff = heff - hspin;
        const cplx c = diff.at(0, 0);
        diff -= c * ComplexMatrix::identity(diff.dim());
        j["equivalence"] = {{"coefficient", {c.real(), c.imag()}},
                            {"off_identity_residual",
                             diff.frobenius_norm() / hspin.frobenius_norm()}};
        write_json(j, emit("betadyne.json"));
    }

    write_manifest(cfg);
    artifacts.push_back("manifest.json");
    return artifacts;
}

}  // namespace epsim
