#include "epsim/io.hpp"

#include <cstdio>
#include <fstream>

#include "epsim/errors.hpp"

namespace epsim {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

nlohmann::json complex_json(const cplx& z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

}  // namespace

void write_trajectory_csv(const Trajectory& trajectory, const std::string& path) {
    std::ofstream out = open_out(path);
    const std::size_t dim = trajectory.fidelities.empty() ? 0 : trajectory.fidelities[0].size();
    out << "t";
    for (std::size_t k = 1; k <= dim; ++k) out << ",fidelity_" << k;
    out << ",eta_norm,state_norm\n";
    for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
        out << format_double(trajectory.times[i]);
        for (std::size_t k = 0; k < dim; ++k)
            out << ',' << format_double(trajectory.fidelities[i][k]);
        out << ',' << format_double(trajectory.eta_norms[i]) << ','
            << format_double(trajectory.state_norms[i]) << '\n';
    }
}

void write_sheet_grid_csv(const SheetGrid& grid, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "x,y,sheet_index,energy,masked\n";
    for (std::size_t ix = 0; ix < grid.x_samples.size(); ++ix)
        for (std::size_t iy = 0; iy < grid.y_samples.size(); ++iy) {
            const bool masked = grid.masked(static_cast<int>(ix), static_cast<int>(iy));
            for (int s = 0; s < grid.dim; ++s) {
                out << format_double(grid.x_samples[ix]) << ','
                    << format_double(grid.y_samples[iy]) << ',' << (s + 1) << ',';
                if (!masked)
                    out << format_double(grid.energy(static_cast<int>(ix), static_cast<int>(iy), s));
                out << ',' << (masked ? 1 : 0) << '\n';
            }
        }
}

nlohmann::json to_json(const PermutationOutcome& outcome) {
    nlohmann::json j;
    j["mapping"] = outcome.mapping;
    j["confidences"] = outcome.confidences;
    j["valid"] = outcome.valid;
    if (!outcome.reason.empty()) j["reason"] = outcome.reason;
    bool bijective = true;
    std::vector<int> hits(outcome.mapping.size(), 0);
    for (int v : outcome.mapping) {
        if (v < 1 || v > static_cast<int>(outcome.mapping.size())) bijective = false;
        else if (++hits[v - 1] > 1) bijective = false;
    }
    j["cycles"] = bijective ? Permutation::from_images(outcome.mapping).cycle_notation() : "";
    return j;
}

nlohmann::json to_json(const GroupClosure& group) {
    nlohmann::json j;
    j["order"] = group.order;
    j["is_abelian"] = group.is_abelian;
    bool all_even = true;
    nlohmann::json els = nlohmann::json::array();
    for (const auto& p : group.elements) {
        all_even = all_even && p.is_even();
        els.push_back(p.cycle_notation());
    }
    j["all_even"] = all_even;
    j["elements"] = els;
    return j;
}

nlohmann::json to_json(const BetadyneParams& params) {
    nlohmann::json j;
    nlohmann::json delta = nlohmann::json::array();
    for (const auto& d : params.detunings) delta.push_back(complex_json(d));
    j["delta"] = delta;
    j["kerr_u"] = params.kerr;
    nlohmann::json beta = nlohmann::json::array();
    for (const auto& b : params.displacements) beta.push_back(complex_json(b));
    j["beta"] = beta;
    nlohmann::json drive = nlohmann::json::array();
    for (const auto& d : params.drives) drive.push_back(complex_json(d));
    j["drive_eta"] = drive;
    j["gamma"] = params.gamma;
    return j;
}

void write_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

}  // namespace epsim
