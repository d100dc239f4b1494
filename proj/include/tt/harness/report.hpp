#pragma once

#include <optional>
#include <string>

#include "tt/harness/scenario.hpp"

namespace tt::harness {

// One row per trial.
std::string report_csv(const MetricsReport& r);
std::string report_markdown(const MetricsReport& r);
// "0.9000", or "N/A" when undefined.
std::string format_rate(std::optional<double> v);

// Writes report.csv, report.md and events.csv into `dir`, creating it.
Result<void, std::string> write_reports(const ScenarioRun& run, const std::string& dir);

}  // namespace tt::harness
