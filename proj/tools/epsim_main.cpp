#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

#include "epsim/errors.hpp"
#include "epsim/kernels.hpp"
#include "epsim/run_config.hpp"

namespace {

int fail(const std::string& type, const std::string& message) {
    nlohmann::json err;
    err["error"] = type;
    err["message"] = message;
    std::cout << err.dump(2) << std::endl;
    if (type == "ConfigError") return 1;
    if (type == "IoError") return 3;
    return 2;
}

struct Overrides {
    std::optional<long> steps;
    std::optional<std::string> output_dir;
    std::optional<int> threads;
    std::optional<double> epsilon;
    std::optional<int> direction;

    void apply(epsim::RunConfig& cfg) const {
        if (steps) cfg.steps = *steps;
        if (output_dir) cfg.output_directory = *output_dir;
        if (threads) cfg.threads = *threads;
        if (epsilon) cfg.epsilon = *epsilon;
        if (direction) cfg.schedule.direction = *direction;
    }
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--steps", ov.steps, "Override integrator step count");
    cmd->add_option("--output-dir", ov.output_dir, "Override output directory");
    cmd->add_option("--threads", ov.threads, "Worker threads for fan-out experiments");
    cmd->add_option("--epsilon", ov.epsilon, "Override the sigma_z perturbation strength");
    cmd->add_option("--direction", ov.direction, "Override winding direction (+1 or -1)")
        ->check(CLI::IsMember({1, -1}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-Hermitian multiqubit EP-encircling simulator"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;
    std::string backend = "auto";
    app.add_option("--simd", backend, "Kernel backend: auto, scalar, avx2, neon");

    CLI::App* run = app.add_subcommand("run", "Run an experiment from a config file");
    run->add_option("config", config_path, "JSON config (or a previous manifest.json)")
        ->required();
    add_override_flags(run, ov);

    CLI::App* validate = app.add_subcommand("validate", "Check a config without running");
    validate->add_option("config", config_path, "JSON config")->required();
    add_override_flags(validate, ov);

    CLI11_PARSE(app, argc, argv);

    if (!epsim::kernels::select_backend(backend))
        return fail("ConfigError", "unknown or unavailable SIMD backend: " + backend);

    try {
        epsim::RunConfig cfg = epsim::load_run_config(config_path);
        ov.apply(cfg);
        if (app.got_subcommand(validate)) {
            for (const std::string& note : epsim::validate_run_config(cfg))
                std::cout << note << '\n';
            std::cout << "ok\n";
            return 0;
        }
        const std::vector<std::string> artifacts = epsim::run_experiment(cfg);
        nlohmann::json out;
        out["status"] = "ok";
        out["output_directory"] = cfg.output_directory;
        out["artifacts"] = artifacts;
        std::cout << out.dump(2) << std::endl;
        return 0;
    } catch (const epsim::ConfigError& e) {
        return fail("ConfigError", e.what());
    } catch (const epsim::IoError& e) {
        return fail("IoError", e.what());
    } catch (const epsim::Error& e) {
        return fail("NumericsError", e.what());
    } catch (const std::exception& e) {
        return fail("InternalError", e.what());
    }
}
