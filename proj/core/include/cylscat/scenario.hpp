#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cylscat/model.hpp"

namespace cylscat {

struct ScenarioError : std::runtime_error {
    int line;
    ScenarioError(int ln, const std::string& msg)
        : std::runtime_error("scenario line " + std::to_string(ln) + ": " + msg),
          line(ln) {}
};

/// Scenario file contents: sectioned key-value plain text. Grids may be
/// given explicitly or left on "auto" sizing.
struct Scenario {
    std::string name;
    Background bg;
    double frequency = 1.2e9;
    MaterialMap map;
    double feature_size = 0.0;  // delta in the cell-size rule; 0 = unset

    double polar_radius = 0.0;  // 0 = auto (object bounding radius)
    int polar_rings = 0;        // 0 = auto via the cell-size rule
    int polar_angles = 0;       // 0 = auto

    int cart_nx = 0, cart_ny = 0;  // 0 = auto
    double cart_cell = 0.0;        // 0 = auto

    double obs_radius = 0.0;  // 0 = auto (3x object radius)
    int obs_samples = 72;

    double tol = 1e-4;
    int max_iter = 500;
};

/// Parse from a file or text; errors carry the offending line number.
/// Paths of raster matrices are resolved relative to the scenario file.
Scenario parse_scenario_file(const std::string& path);
Scenario parse_scenario_text(const std::string& text, const std::string& name = "inline");

/// Built-in scenarios addressable as "builtin:<name>":
/// fig2a_square, fig2b_square, fig3a_two_layer, fig3b_two_layer, arm_like,
/// free_space.
Scenario builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

/// Is this a "builtin:" reference? Loads either kind.
Scenario load_scenario(const std::string& path_or_builtin);

/// Concrete grids for a scenario; forced_delta > 0 overrides the cell size
/// (benchmark sweeps), otherwise explicit settings win over the auto rule.
struct ResolvedGrids {
    PolarGrid polar;
    CartesianGrid cart;
    ObservationCircle circle;
    double delta = 0.0;       // radial / cartesian cell size actually used
    double delta_bound = 0.0; // the cell-size rule value min(lambda_min/10, feature/2)
};

ResolvedGrids resolve_grids(const Scenario& s, double forced_delta = 0.0);

}  // namespace cylscat
