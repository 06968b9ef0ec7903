#pragma once

// Subcommands. Each writes its CSV/SVG artifacts and <command>_report.json
// into cfg.out and returns the report; the exit status of the tool is
// report.passed().

#include <string>
#include <vector>

#include "heun/cli/config.hpp"
#include "heun/cli/report.hpp"

namespace heun::cli {

Report cmd_spectral(const RunConfig& cfg);
Report cmd_ellipse(const RunConfig& cfg);
Report cmd_verify_ode(const RunConfig& cfg);
Report cmd_special(const RunConfig& cfg);
Report cmd_takemura(const RunConfig& cfg);
Report cmd_balayage(const RunConfig& cfg);
Report cmd_all(const RunConfig& cfg);

const std::vector<std::string>& command_names();
/// Throws heun::Error(InvalidArgument) for an unknown name.
Report run_command(const std::string& name, const RunConfig& cfg);

/// `count` points on a circle around the root centroid that lies outside the
/// support regions of all three averaged measures, with clearance `pad`
/// times the root diameter.
std::vector<Complex> exterior_points(const CubicConfig& c, int count, double pad = 0.15);

/// Global P = Q' for monic Q, the alternative P choice for independence
/// checks.
LowDegreePoly derivative_poly(const CubicConfig& c);

}  // namespace heun::cli
