#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "am2/diagram.hpp"
#include "am2/simulate.hpp"
#include "am2/stability.hpp"

namespace am2::io {

/// Shortest round-trip decimal form, identical across runs ("%.17g" with
/// canonical inf/nan spellings).
std::string format_double(double v);

std::string equilibria_csv(const ModelParams& p, const std::vector<ClassifiedEquilibrium>& eqs);
std::string equilibria_json(const ModelParams& p, const std::vector<ClassifiedEquilibrium>& eqs);

std::string trajectory_csv(const Trajectory& traj);

/// Convergence attribution plus invariant findings for one run.
std::string simulation_report_json(const ModelParams& p, const Trajectory& traj,
                                   const ConvergenceReport& conv,
                                   const std::vector<InvariantViolation>& violations);

std::string grid_csv(const RegionGrid& grid);

/// Raster of the grid colored by LES-set with analytic boundary overlays
/// and a legend.
std::string grid_svg(const RegionGrid& grid, const std::vector<BoundaryCurve>& curves);

void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace am2::io
