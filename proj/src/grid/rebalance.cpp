#include "desgrid/grid/rebalance.hpp"

#include <algorithm>
#include <cmath>

namespace desgrid::grid {

namespace {

constexpr double kTol = 1e-9;

void rebalance_into(const Island& isl, GridCase& c, RebalanceResult& r) {
  std::vector<std::size_t> gens;
  for (std::size_t g = 0; g < c.gens.size(); ++g)
    if (c.gens[g].in_service && std::binary_search(isl.buses.begin(), isl.buses.end(),
                                                   c.gens[g].bus_index, [&](auto a, auto b) {
                                                     return c.buses[a].id < c.buses[b].id;
                                                   }))
      gens.push_back(g);

  double load = 0, positive = 0;
  for (std::size_t b : isl.buses) {
    load += c.buses[b].load_mw;
    positive += std::max(0.0, c.buses[b].load_mw);
  }
  double lost = 0;
  auto drop_all_load = [&] {
    for (std::size_t b : isl.buses) {
      if (c.buses[b].load_mw > 0) {
        lost += c.buses[b].load_mw;
        r.lost_load_buses.push_back(b);
      }
      c.buses[b].load_mw = 0;
    }
  };

  if (gens.empty()) {
    drop_all_load();
  } else {
    double gen = 0, cap_max = 0, cap_min = 0;
    for (std::size_t g : gens) {
      gen += c.gens[g].p_mw;
      cap_max += c.gens[g].p_max;
      cap_min += c.gens[g].p_min;
    }
    double scale = std::max({1.0, std::abs(load), gen});
    if (load > gen + kTol * scale) {
      if (load <= cap_max) {
        double need = load - gen, room = cap_max - gen;
        for (std::size_t g : gens) {
          auto& u = c.gens[g];
          u.p_mw += need * (u.p_max - u.p_mw) / room;
        }
      } else {
        for (std::size_t g : gens) c.gens[g].p_mw = c.gens[g].p_max;
        double shed = load - cap_max;
        double keep = positive > 0 ? std::max(0.0, 1.0 - shed / positive) : 0.0;
        for (std::size_t b : isl.buses) {
          double& l = c.buses[b].load_mw;
          if (l <= 0) continue;
          double nl = l * keep;
          lost += l - nl;
          if (nl <= kTol) {
            nl = 0;
            r.lost_load_buses.push_back(b);
          }
          l = nl;
        }
      }
    } else if (gen > load + kTol * scale) {
      // Trip units until the remaining minimum output fits under the load.
      std::vector<std::size_t> order = gens;
      std::stable_sort(order.begin(), order.end(),
                       [&](auto a, auto b) { return c.gens[a].p_min > c.gens[b].p_min; });
      std::size_t next = 0;
      while (cap_min > load + kTol * scale && next < order.size() && c.gens[order[next]].p_min > 0) {
        auto& u = c.gens[order[next++]];
        cap_min -= u.p_min;
        gen -= u.p_mw;
        u.in_service = false;
        u.p_mw = 0;
        r.tripped_gens.push_back(static_cast<std::size_t>(&u - c.gens.data()));
      }
      std::vector<std::size_t> on;
      for (std::size_t g : gens)
        if (c.gens[g].in_service) on.push_back(g);
      if (on.empty()) {
        drop_all_load();
      } else if (load >= cap_min) {
        double cut = gen - load, margin = gen - cap_min;
        if (margin > 0)
          for (std::size_t g : on) {
            auto& u = c.gens[g];
            u.p_mw -= cut * (u.p_mw - u.p_min) / margin;
          }
      } else {
        // Net injection from negative loads exceeds what the units can absorb.
        for (std::size_t g : on) c.gens[g].p_mw = c.gens[g].p_min;
        double excess = cap_min - load;
        for (std::size_t b : isl.buses) {
          double& l = c.buses[b].load_mw;
          if (l < 0 && excess > 0) {
            double take = std::min(-l, excess);
            l += take;
            excess -= take;
          }
        }
      }
    }
  }
  for (std::size_t g : gens) {
    auto& u = c.gens[g];
    if (u.in_service) u.p_mw = std::clamp(u.p_mw, u.p_min, u.p_max);
  }
  r.mw_lost += lost;
  if (lost > 0) r.island_losses.emplace_back(isl.buses.front(), lost);
}

}  // namespace

RebalanceResult rebalance_island(const Island& island, const GridCase& c) {
  RebalanceResult r;
  r.grid = c;
  rebalance_into(island, r.grid, r);
  return r;
}

RebalanceResult rebalance_all(const GridCase& c) {
  RebalanceResult r;
  r.grid = c;
  for (const auto& isl : find_islands(c)) rebalance_into(isl, r.grid, r);
  return r;
}

}  // namespace desgrid::grid
