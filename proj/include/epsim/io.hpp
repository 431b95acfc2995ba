#pragma once

#include <string>

#include <json.hpp>

#include "epsim/betadyne.hpp"
#include "epsim/dynamics.hpp"
#include "epsim/permutation.hpp"
#include "epsim/spectral.hpp"

namespace epsim {

// Full-precision decimal formatting (17 significant digits) so identical runs
// produce bit-identical artifacts.
std::string format_double(double v);

void write_trajectory_csv(const Trajectory& trajectory, const std::string& path);
void write_sheet_grid_csv(const SheetGrid& grid, const std::string& path);

nlohmann::json to_json(const PermutationOutcome& outcome);
nlohmann::json to_json(const GroupClosure& group);
nlohmann::json to_json(const BetadyneParams& params);

void write_json(const nlohmann::json& j, const std::string& path);

}  // namespace epsim
