#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "desgrid/experiments/sampling.hpp"

namespace desgrid::experiments {

struct ScenarioSummary {
  int id = 0;
  cascade::ControlMode mode = cascade::ControlMode::None;
  int from_branch = 0;
  int to_branch = 0;
  double mw_lost_total = 0.0;
  double mw_lost_rebalance = 0.0;
  double mw_lost_control = 0.0;
  int line_trips = 0;
  cascade::Termination terminated = cascade::Termination::Converged;
  bool failed = false;
  std::string error;
};

struct CcdPoint {
  double x = 0.0;
  double fraction = 0.0;
};

struct ModeResults {
  cascade::ControlMode mode = cascade::ControlMode::None;
  std::vector<ScenarioSummary> scenarios;  // ordered by id
  int failed = 0;
  double median_mw_lost = 0.0;
  double median_line_trips = 0.0;
  std::vector<CcdPoint> ccd_blackout;
  std::vector<CcdPoint> ccd_trips;
};

struct AggregateResults {
  MonteCarloConfig config;
  std::vector<ModeResults> modes;
  const ModeResults* find(cascade::ControlMode m) const;
};

double median(std::vector<double> values);
std::vector<CcdPoint> compute_ccd(std::vector<double> samples);
// Fraction of samples at least x.
double ccd_at(const std::vector<CcdPoint>& ccd, double x);

// Resolves "case30" style names against data_dir, otherwise treats the
// argument as a path, then prepares the case for simulation.
grid::GridCase load_prepared_case(const std::string& name_or_path,
                                  const std::filesystem::path& data_dir);

// Runs the listed scenario ids under one mode. Failures are recorded in the
// summary, never thrown.
std::vector<ScenarioSummary> run_scenarios(const MonteCarloConfig& config, const grid::GridCase& prepared,
                                           const modular::SupervisorLibrary* controllers,
                                           cascade::ControlMode mode, const std::vector<int>& ids);

AggregateResults aggregate(const MonteCarloConfig& config, std::vector<ScenarioSummary> summaries);

// Builds controllers internally when `controllers` is null and a modular pass
// is requested.
AggregateResults run_monte_carlo(const MonteCarloConfig& config, const grid::GridCase& prepared,
                                 const modular::SupervisorLibrary* controllers = nullptr);

}  // namespace desgrid::experiments
