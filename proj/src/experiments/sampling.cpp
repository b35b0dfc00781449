#include "desgrid/experiments/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "desgrid/error.hpp"

namespace desgrid::experiments {

void validate_config(const MonteCarloConfig& config) {
  if (config.n_scenarios < 1) throw Error("n_scenarios must be at least 1");
  if (!(config.sigma >= 0)) throw Error("sigma must be non-negative");
  if (config.modes.empty()) throw Error("at least one control mode is required");
  if (config.delay_ticks < 0) throw Error("delay must be non-negative");
  if (config.max_ticks < 1) throw Error("max_ticks must be positive");
  if (config.workers < 1) throw Error("workers must be at least 1");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

ScenarioRng::ScenarioRng(std::uint64_t seed, std::uint64_t index)
    : engine_(splitmix64(seed + index * 0x9E3779B97F4A7C15ULL)) {}

double ScenarioRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double ScenarioRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

std::pair<std::size_t, std::size_t> pair_from_index(std::uint64_t idx, std::size_t n) {
  if (n < 2) throw Error("need at least two branches to draw a pair");
  for (std::size_t a = 0; a + 1 < n; ++a) {
    std::uint64_t row = n - 1 - a;
    if (idx < row) return {a, a + 1 + idx};
    idx -= row;
  }
  throw Error("pair index out of range");
}

cascade::ScenarioConfig sample_scenario(const MonteCarloConfig& config, const grid::GridCase& c,
                                        std::uint64_t index) {
  std::vector<int> live;
  for (std::size_t k = 0; k < c.branches.size(); ++k)
    if (c.branches[k].in_service) live.push_back(grid::GridCase::branch_id(k));
  if (live.size() < 2) throw Error("case has fewer than two in-service branches");

  ScenarioRng rng(config.seed, index);
  std::uint64_t pairs = live.size() * (live.size() - 1) / 2;
  auto idx = std::min<std::uint64_t>(static_cast<std::uint64_t>(rng.uniform() * pairs), pairs - 1);
  auto [a, b] = pair_from_index(idx, live.size());

  cascade::ScenarioConfig s;
  s.initial_outage = {live[a], live[b]};
  s.load_multipliers.resize(c.buses.size());
  for (double& m : s.load_multipliers) m = std::max(0.0, 1.0 + config.sigma * rng.normal());
  s.delay_ticks = config.delay_ticks;
  s.max_ticks = config.max_ticks;
  return s;
}

std::vector<cascade::ScenarioConfig> sample_scenarios(const MonteCarloConfig& config,
                                                      const grid::GridCase& c) {
  validate_config(config);
  std::vector<cascade::ScenarioConfig> out;
  out.reserve(config.n_scenarios);
  for (int i = 0; i < config.n_scenarios; ++i) out.push_back(sample_scenario(config, c, i));
  return out;
}

}  // namespace desgrid::experiments
