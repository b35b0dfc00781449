#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "desgrid/cascade/engine.hpp"
#include "desgrid/grid/case.hpp"

namespace desgrid::experiments {

struct MonteCarloConfig {
  std::string case_name = "case30";
  int n_scenarios = 200;
  std::uint64_t seed = 1;
  double sigma = 0.15;
  std::vector<cascade::ControlMode> modes{cascade::ControlMode::None, cascade::ControlMode::Modular,
                                          cascade::ControlMode::CentralEmergency};
  int delay_ticks = 0;
  int max_ticks = 100;
  int workers = 1;
};

void validate_config(const MonteCarloConfig& config);

std::uint64_t splitmix64(std::uint64_t x);

// Scenario i draws from mt19937_64 seeded with splitmix64(seed + i * golden),
// so any index can be regenerated on its own.
class ScenarioRng {
 public:
  ScenarioRng(std::uint64_t seed, std::uint64_t index);
  double uniform();  // [0, 1) with 53 bits
  double normal();   // Box-Muller, both variates used in turn
 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Unordered pair number idx (0-based, lexicographic over a < b) out of n(n-1)/2.
std::pair<std::size_t, std::size_t> pair_from_index(std::uint64_t idx, std::size_t n);

cascade::ScenarioConfig sample_scenario(const MonteCarloConfig& config, const grid::GridCase& c,
                                        std::uint64_t index);
// Mode is left at None; the runner sets it per pass.
std::vector<cascade::ScenarioConfig> sample_scenarios(const MonteCarloConfig& config,
                                                      const grid::GridCase& c);

}  // namespace desgrid::experiments
