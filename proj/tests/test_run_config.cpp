#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "epsim/errors.hpp"
#include "epsim/run_config.hpp"

using namespace epsim;
namespace fs = std::filesystem;

namespace {

nlohmann::json single_qubit_permute(const std::string& outdir) {
    return {
        {"experiment", "permute"},
        {"system", {{"n_qubits", 1}, {"field_scales", {1.0}}, {"couplings", {{0.0}}}}},
        {"schedule", {{"r_x", 1.0}, {"r_y", 2.0}, {"period", 200.0}}},
        {"numerics", {{"steps", 20000}, {"samples", 100}}},
        {"output", {{"directory", outdir}}},
    };
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("configs parse with defaults and missing couplings warn to zero") {
    nlohmann::json j = {
        {"experiment", "spectrum"},
        {"system", {{"n_qubits", 2}, {"field_scales", {1.0, 2.0}}}},
    };
    const RunConfig cfg = parse_run_config(j);
    CHECK(cfg.system.couplings[0][1] == 0.0);
    CHECK(cfg.schedule.phi_0 == doctest::Approx(M_PI));
    CHECK(cfg.steps == 200000);
    CHECK_NOTHROW(validate_run_config(cfg));
}

TEST_CASE("a loop through the EP is a config error naming the exclusion rule") {
    nlohmann::json j = single_qubit_permute("unused");
    j["schedule"]["r_x"] = 0.5;
    j["schedule"]["r_y"] = 0.5;  // circle of radius 0.5 centered (0, 0.5): passes (0, 1)
    const RunConfig cfg = parse_run_config(j);
    try {
        validate_run_config(cfg);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("EP") != std::string::npos);
    }
}

TEST_CASE("validation reports the resolved schedule endpoints") {
    const RunConfig cfg = parse_run_config(single_qubit_permute("unused"));
    const std::vector<std::string> notes = validate_run_config(cfg);
    bool saw_start = false, saw_mid = false;
    for (const std::string& n : notes) {
        if (n.find("start") != std::string::npos) saw_start = true;
        if (n.find("midpoint") != std::string::npos) saw_mid = true;
    }
    CHECK(saw_start);
    CHECK(saw_mid);
}

TEST_CASE("unknown experiments and bad values are rejected") {
    nlohmann::json j = single_qubit_permute("unused");
    j["experiment"] = "frobnicate";
    CHECK_THROWS_AS(parse_run_config(j), ConfigError);
    j["experiment"] = "permute";
    j["numerics"]["threshold"] = 0.2;
    CHECK_THROWS_AS(validate_run_config(parse_run_config(j)), ConfigError);
}

TEST_CASE("permute experiment writes artifacts and a runnable manifest") {
    TempDir tmp("epsim_cfg_test");
    const std::string out1 = (tmp.path / "run1").string();
    RunConfig cfg = parse_run_config(single_qubit_permute(out1));
    const std::vector<std::string> artifacts = run_experiment(cfg);
    CHECK(fs::exists(fs::path(out1) / "permutation.json"));
    CHECK(fs::exists(fs::path(out1) / "manifest.json"));
    CHECK(fs::exists(fs::path(out1) / "trajectory_1.csv"));

    // Re-running from the manifest reproduces byte-identical artifacts.
    RunConfig again = load_run_config((fs::path(out1) / "manifest.json").string());
    const std::string out2 = (tmp.path / "run2").string();
    again.output_directory = out2;
    run_experiment(again);
    for (const std::string& name : artifacts) {
        if (name == "manifest.json") continue;  // embeds the output directory
        CHECK(read_file(fs::path(out1) / name) == read_file(fs::path(out2) / name));
        CHECK(!read_file(fs::path(out2) / name).empty());
    }

    // Determinism: re-running the same config is bit-identical too.
    const std::string out3 = (tmp.path / "run3").string();
    RunConfig third = cfg;
    third.output_directory = out3;
    run_experiment(third);
    CHECK(read_file(fs::path(out1) / "permutation.json") ==
          read_file(fs::path(out3) / "permutation.json"));
    CHECK(read_file(fs::path(out1) / "trajectory_1.csv") ==
          read_file(fs::path(out3) / "trajectory_1.csv"));
}

TEST_CASE("spectrum experiment: single-qubit sheet values are symmetric") {
    TempDir tmp("epsim_cfg_spec");
    nlohmann::json j = {
        {"experiment", "spectrum"},
        {"system", {{"n_qubits", 1}, {"field_scales", {1.0}}, {"couplings", {{0.0}}}}},
        {"grid",
         {{"x_min", -1.0}, {"x_max", 1.0}, {"y_min", 0.0}, {"y_max", 0.8}, {"resolution", 5}}},
        {"output", {{"directory", (tmp.path / "spec").string()}}},
    };
    run_experiment(parse_run_config(j));
    std::ifstream in(tmp.path / "spec" / "sheetgrid.csv");
    std::string line;
    std::getline(in, line);  // header
    double emin = 0.0;
    while (std::getline(in, line)) {
        const auto c1 = line.find(','), c2 = line.find(',', c1 + 1), c3 = line.find(',', c2 + 1);
        const int sheet = std::stoi(line.substr(c2 + 1, c3 - c2 - 1));
        const double e = std::stod(line.substr(c3 + 1));
        if (sheet == 1)
            emin = e;
        else
            CHECK(emin == doctest::Approx(-e).epsilon(1e-9));
    }
}

TEST_CASE("the flagship permute config emits the expected cycles") {
    TempDir tmp("epsim_cfg_fig4");
    nlohmann::json j = {
        {"experiment", "permute"},
        {"system",
         {{"n_qubits", 3},
          {"field_scales", {1.0, 1.0, 2.0}},
          {"couplings", {{0.0, 1.0, 1.0}, {1.0, 0.0, 1.0}, {1.0, 1.0, 0.0}}}}},
        {"schedule", {{"r_x", 3.0}, {"r_y", 6.0}, {"period", 2500.0}}},
        {"numerics", {{"steps", 200000}, {"samples", 100}}},
        {"output", {{"directory", (tmp.path / "fig4").string()}}},
    };
    run_experiment(parse_run_config(j));
    std::ifstream in(tmp.path / "fig4" / "permutation.json");
    nlohmann::json out;
    in >> out;
    CHECK(out["valid"] == true);
    CHECK(out["cycles"] == "(1,5)(2,6)(3,4)(7,8)");
}

TEST_CASE("sweep experiment writes one row per epsilon and direction") {
    TempDir tmp("epsim_cfg_sweep");
    nlohmann::json j = single_qubit_permute((tmp.path / "sw").string());
    j["experiment"] = "sweep";
    j["sweep"] = {{"epsilons", {0.0, 0.2}}, {"directions", {1, -1}}};
    run_experiment(parse_run_config(j));
    std::ifstream in(tmp.path / "sw" / "sweep.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "epsilon,direction,valid,cycles,min_confidence");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 4);
}

TEST_CASE("group experiment emits order and table") {
    TempDir tmp("epsim_cfg_group");
    nlohmann::json j = {
        {"experiment", "group"},
        {"system",
         {{"n_qubits", 3},
          {"field_scales", {1.0, 1.0, 2.0}},
          {"couplings", {{0.0, 1.0, 1.0}, {1.0, 0.0, 1.0}, {1.0, 1.0, 0.0}}}}},
        {"group",
         {{"generators",
           {"(1,5)(2,6)(3,4)(7,8)", "(1,2)(3,6)(4,5)(7,8)", "(1,3)(2,6)(4,8)(5,7)",
            "(1,3)(2,6)(4,5)(7,8)", "(1,3)(2,4)(5,7)(6,8)", "(1,8)(2,6)(3,7)(4,5)"}}}},
        {"output", {{"directory", (tmp.path / "grp").string()}}},
    };
    run_experiment(parse_run_config(j));
    std::ifstream in(tmp.path / "grp" / "group.json");
    nlohmann::json out;
    in >> out;
    CHECK(out["order"] == 576);
    CHECK(out["is_abelian"] == false);
    CHECK(out["all_even"] == true);
}
