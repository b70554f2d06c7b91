#pragma once

#include <string>
#include <string_view>

#include "stands/harness.hpp"

namespace stands {

// Scenario files are flat sectioned key-value text:
//
//   [layout]   offsets = 1, 0, 2      reference = 1
//   [object]   distance = 10.0        range_override = 10.05, 10, 10.2 (optional)
//   [noise]    kind = none|uniform|gaussian; uniform: low, high; gaussian: mean, sigma
//   [detector] sigma, alpha, threshold_mode = calibrated|chi_squared;
//              optional: dof (default sensor count - 1), k (default 2),
//              temporal_threshold (default: derived from the baseline)
//   [attack]   repeatable block: sensor, kind = triggering|deflection, onset;
//              optional: spoof_range (defaults 0.1 / 100), duration (runs, or "open")
//   [sim]      runs, seed, calibration_runs
//
// '#' starts a comment. Unknown sections or keys are hard errors: a silent
// typo in a threshold key would invalidate every conclusion drawn from the
// run, so the config fails closed.

/// Parses and validates a scenario file. ParseError for malformed text
/// (naming file, line and key), ValidationError for well-formed values that
/// break an invariant.
ScenarioSpec parse_scenario_file(const std::string& path);

/// Same, over in-memory text; origin is the name used in diagnostics.
ScenarioSpec parse_scenario_text(std::string_view text, std::string_view origin = "<string>");

/// Renders a spec back to config text, every optional resolved to its
/// effective value. Parsing the result reproduces an equivalent spec.
/// The optional calibration summary is prepended as provenance comments
/// (derived thresholds, baseline statistics).
std::string echo_scenario(const ScenarioSpec& spec, const CalibrationSummary* calibration = nullptr);

}  // namespace stands
