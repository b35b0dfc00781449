#pragma once

#include <vector>

#include "desgrid/grid/case.hpp"
#include "desgrid/grid/islands.hpp"

namespace desgrid::grid {

struct RebalanceResult {
  GridCase grid;
  double mw_lost = 0.0;                       // involuntarily shed load
  std::vector<std::size_t> tripped_gens;      // generator indices
  std::vector<std::size_t> lost_load_buses;   // buses whose positive load fell to zero
  std::vector<std::pair<std::size_t, double>> island_losses;  // (first bus index, MW)
};

// Restores generation/load balance of one island. Shortfall: generators ramp
// toward p_max in proportion to headroom, then remaining load is shed in
// proportion to load. Surplus: generators ramp toward p_min in proportion to
// their margin above it, then units are tripped largest p_min first. An
// island without generation loses all its load.
RebalanceResult rebalance_island(const Island& island, const GridCase& c);

RebalanceResult rebalance_all(const GridCase& c);

}  // namespace desgrid::grid
