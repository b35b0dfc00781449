#pragma once

#include <vector>

#include "desgrid/grid/case.hpp"

namespace desgrid::grid {

struct Island {
  std::vector<std::size_t> buses;     // bus indices, ascending bus id
  std::vector<std::size_t> branches;  // in-service branch indices, ascending
  bool has_generation = false;        // some in-service generator
};

// Connected components of the in-service branch graph, ordered by least bus id.
std::vector<Island> find_islands(const GridCase& c);

// island_of[bus index] for the islands above.
std::vector<std::size_t> island_membership(const GridCase& c, const std::vector<Island>& islands);

// Per-island reference bus: least-id bus with an in-service generator,
// else least-id bus. Returns a bus index.
std::size_t island_slack(const GridCase& c, const Island& island);

}  // namespace desgrid::grid
