#include "desgrid/grid/islands.hpp"

#include <algorithm>
#include <limits>

namespace desgrid::grid {

std::vector<Island> find_islands(const GridCase& c) {
  const std::size_t n = c.buses.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& br : c.branches)
    if (br.in_service) {
      adj[br.from_index].push_back(br.to_index);
      adj[br.to_index].push_back(br.from_index);
    }

  std::vector<std::size_t> by_id(n);
  for (std::size_t i = 0; i < n; ++i) by_id[i] = i;
  std::sort(by_id.begin(), by_id.end(),
            [&](auto a, auto b) { return c.buses[a].id < c.buses[b].id; });

  constexpr auto none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> comp(n, none);
  std::vector<Island> islands;
  for (std::size_t start : by_id) {
    if (comp[start] != none) continue;
    Island isl;
    comp[start] = islands.size();
    std::vector<std::size_t> stack{start};
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      isl.buses.push_back(v);
      for (std::size_t w : adj[v])
        if (comp[w] == none) {
          comp[w] = islands.size();
          stack.push_back(w);
        }
    }
    std::sort(isl.buses.begin(), isl.buses.end(),
              [&](auto a, auto b) { return c.buses[a].id < c.buses[b].id; });
    islands.push_back(std::move(isl));
  }
  for (std::size_t k = 0; k < c.branches.size(); ++k)
    if (c.branches[k].in_service) islands[comp[c.branches[k].from_index]].branches.push_back(k);
  for (const auto& g : c.gens)
    if (g.in_service) islands[comp[g.bus_index]].has_generation = true;
  return islands;
}

std::vector<std::size_t> island_membership(const GridCase& c, const std::vector<Island>& islands) {
  std::vector<std::size_t> of(c.buses.size(), 0);
  for (std::size_t i = 0; i < islands.size(); ++i)
    for (std::size_t b : islands[i].buses) of[b] = i;
  return of;
}

std::size_t island_slack(const GridCase& c, const Island& island) {
  std::vector<bool> has_gen(c.buses.size(), false);
  for (const auto& g : c.gens)
    if (g.in_service) has_gen[g.bus_index] = true;
  for (std::size_t b : island.buses)
    if (has_gen[b]) return b;
  return island.buses.front();
}

}  // namespace desgrid::grid
