#pragma once

#include <string>
#include <string_view>

#include "boson_decay/config.hpp"
#include "boson_decay/report.hpp"

namespace boson_decay {

inline constexpr std::string_view library_version = "0.1.0";

/// Pass/fail bound used by wwa-validate.
inline constexpr double wwa_tolerance = 2e-2;

/// Runs one scenario over its time grid. Rows are computed in parallel but
/// the result does not depend on the worker count.
RunReport run_scenario(const ScenarioConfig& config);

/// One-line human summary of a report (empty when the scenario has none).
std::string summary_line(const RunReport& report);

}  // namespace boson_decay
