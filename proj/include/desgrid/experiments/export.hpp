#pragma once

#include <filesystem>
#include <vector>

#include "desgrid/experiments/monte_carlo.hpp"

namespace desgrid::experiments {

void export_results(const AggregateResults& agg, const std::filesystem::path& out_dir);

std::string summary_json(const AggregateResults& agg);
void write_scenarios_csv(std::ostream& out, const AggregateResults& agg);
void write_ccd_csv(std::ostream& out, const std::vector<CcdPoint>& ccd, const char* x_name);

// Reads a scenarios.csv written by export_results.
std::vector<ScenarioSummary> read_scenarios_csv(const std::filesystem::path& path);

}  // namespace desgrid::experiments
