#include "desgrid/shed/local_lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "desgrid/error.hpp"
#include "desgrid/grid/rebalance.hpp"

namespace desgrid::shed {

std::size_t select_critical_line(const grid::GridCase& c, const grid::FlowSolution& f,
                                 const std::vector<std::size_t>& branches) {
  if (branches.empty()) throw Error("empty neighborhood");
  std::size_t best = branches.front();
  double best_load = -1;
  for (std::size_t k : branches) {
    double l = grid::loading(c, f, k);
    if (l > best_load || (l == best_load && k < best)) {
      best = k;
      best_load = l;
    }
  }
  return best;
}

namespace {

// Both limits of one branch: the row along the present flow, then the
// reverse direction so a shed cannot push the flow past -rating.
void add_branch_rows(ShedLP& lp, std::size_t k, std::vector<double> row, double rating,
                     double abs_flow) {
  std::vector<double> back(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) back[j] = -row[j];
  lp.flow_rows.push_back(std::move(row));
  lp.rhs.push_back(rating - abs_flow);
  lp.row_branches.push_back(k);
  lp.flow_rows.push_back(std::move(back));
  lp.rhs.push_back(rating + abs_flow);
  lp.row_branches.push_back(k);
}

ShedLP formulate(const grid::GridCase& c, const grid::FlowSolution& f,
                 const grid::PTDFMatrix& ptdf, int node, const std::vector<std::size_t>& buses,
                 const std::vector<std::size_t>& rows, std::optional<std::size_t> critical,
                 const LpOptions& options) {
  ShedLP lp;
  lp.node = node;
  auto islands = grid::find_islands(c);
  auto island_of = grid::island_membership(c, islands);

  std::map<std::size_t, std::size_t> group_of_island;
  std::vector<std::size_t> var_group;
  for (std::size_t b : buses) {
    if (c.buses[b].load_mw <= 0) continue;
    std::size_t isl = island_of[b];
    if (!islands[isl].has_generation) continue;
    auto [it, fresh] = group_of_island.try_emplace(isl, lp.groups.size());
    if (fresh) {
      BalanceGroup g;
      auto collect = [&](bool restricted) {
        g.gens.clear();
        g.headroom = 0;
        for (std::size_t u = 0; u < c.gens.size(); ++u) {
          const auto& gen = c.gens[u];
          if (!gen.in_service || island_of[gen.bus_index] != isl) continue;
          if (restricted && !(*options.participating)[u]) continue;
          double h = gen.p_mw - gen.p_min;
          if (h <= 1e-9) continue;
          g.gens.emplace_back(u, h);
          g.headroom += h;
        }
      };
      collect(options.participating != nullptr);
      if (g.headroom <= 1e-9 && options.participating) collect(false);
      for (auto& [u, share] : g.gens) share /= g.headroom;
      lp.groups.push_back(std::move(g));
    }
    lp.groups[it->second].vars.push_back(lp.buses.size());
    var_group.push_back(it->second);
    lp.buses.push_back(b);
    lp.upper.push_back(c.buses[b].load_mw);
  }

  for (std::size_t k : rows) {
    if (!c.branches[k].in_service) continue;
    if (critical == k) lp.critical_row = lp.row_branches.size();
    double flow = f.flows[k];
    double sign = flow < 0 ? -1.0 : 1.0;
    std::vector<double> row(lp.buses.size());
    for (std::size_t v = 0; v < lp.buses.size(); ++v) {
      double s = ptdf.entries(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(lp.buses[v]));
      for (auto [u, share] : lp.groups[var_group[v]].gens)
        s -= share * ptdf.entries(static_cast<Eigen::Index>(k),
                                  static_cast<Eigen::Index>(c.gens[u].bus_index));
      row[v] = sign * s;
    }
    add_branch_rows(lp, k, std::move(row), c.branches[k].rating_mw, std::abs(flow));
  }
  return lp;
}

}  // namespace

ShedLP formulate_local_lp(const grid::GridCase& c, const grid::FlowSolution& f,
                          const grid::PTDFMatrix& ptdf, int node, std::size_t critical,
                          const Neighborhood& hood, const LpOptions& options) {
  if (std::find(hood.branches.begin(), hood.branches.end(), critical) == hood.branches.end())
    throw Error("critical line " + std::to_string(critical + 1) + " outside the neighborhood");
  std::vector<std::size_t> rows =
      options.constrain_all_branches ? hood.branches : std::vector<std::size_t>{critical};
  std::sort(rows.begin(), rows.end());
  std::vector<std::size_t> buses = hood.buses;
  std::sort(buses.begin(), buses.end(),
            [&](auto a, auto b) { return c.buses[a].id < c.buses[b].id; });
  return formulate(c, f, ptdf, node, buses, rows, critical, options);
}

ShedLP formulate_global_lp(const grid::GridCase& c, const grid::FlowSolution& f,
                           const grid::PTDFMatrix& ptdf) {
  ShedLP lp;
  auto islands = grid::find_islands(c);
  auto island_of = grid::island_membership(c, islands);
  std::vector<std::size_t> buses(c.buses.size());
  for (std::size_t b = 0; b < buses.size(); ++b) buses[b] = b;
  std::sort(buses.begin(), buses.end(),
            [&](auto a, auto b) { return c.buses[a].id < c.buses[b].id; });
  for (std::size_t b : buses)
    if (c.buses[b].load_mw > 0 && islands[island_of[b]].has_generation) {
      lp.buses.push_back(b);
      lp.upper.push_back(c.buses[b].load_mw);
    }
  for (std::size_t u = 0; u < c.gens.size(); ++u) {
    const auto& g = c.gens[u];
    if (!g.in_service) continue;
    lp.gens.push_back(u);
    lp.raise_cap.push_back(std::max(0.0, g.p_max - g.p_mw));
    lp.lower_cap.push_back(std::max(0.0, g.p_mw - g.p_min));
  }
  const std::size_t n = lp.buses.size(), m = lp.gens.size();
  auto col_bus = [&](std::size_t col) {
    return col < n ? lp.buses[col] : c.gens[lp.gens[(col - n) % m]].bus_index;
  };
  auto col_sign = [&](std::size_t col) { return col < n + m ? 1.0 : -1.0; };
  const std::size_t width = n + 2 * m;

  for (std::size_t k = 0; k < c.branches.size(); ++k) {
    if (!c.branches[k].in_service) continue;
    double sign = f.flows[k] < 0 ? -1.0 : 1.0;
    std::vector<double> row(width);
    for (std::size_t col = 0; col < width; ++col)
      row[col] = sign * col_sign(col) *
                 ptdf.entries(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(col_bus(col)));
    add_branch_rows(lp, k, std::move(row), c.branches[k].rating_mw, std::abs(f.flows[k]));
  }
  std::map<std::size_t, std::vector<double>> balance;
  for (std::size_t col = 0; col < width; ++col) {
    auto& row = balance.try_emplace(island_of[col_bus(col)], width, 0.0).first->second;
    row[col] = col_sign(col);
  }
  for (auto& [isl, row] : balance) lp.balance_rows.push_back(std::move(row));
  return lp;
}

ShedSolution solve_lp(const ShedLP& lp) {
  LinearProgram p;
  const std::size_t n = lp.buses.size(), m = lp.gens.size();
  // Redispatch carries a small cost so the least movement is chosen.
  p.cost.assign(n, 1.0);
  p.cost.resize(n + 2 * m, 1e-4);
  p.upper = lp.upper;
  p.upper.insert(p.upper.end(), lp.raise_cap.begin(), lp.raise_cap.end());
  p.upper.insert(p.upper.end(), lp.lower_cap.begin(), lp.lower_cap.end());
  p.rows = lp.flow_rows;
  p.rhs = lp.rhs;
  for (const auto& g : lp.groups) {
    // Without headroom the shed is balanced by the fallback rebalance.
    if (g.gens.empty()) continue;
    std::vector<double> row(n, 0.0);
    for (std::size_t v : g.vars) row[v] = 1.0;
    p.rows.push_back(std::move(row));
    p.rhs.push_back(g.headroom);
  }
  for (const auto& row : lp.balance_rows) {
    p.rows.push_back(row);
    p.rhs.push_back(0.0);
    std::vector<double> neg(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) neg[j] = -row[j];
    p.rows.push_back(std::move(neg));
    p.rhs.push_back(0.0);
  }
  ShedSolution s;
  s.node = lp.node;
  s.buses = lp.buses;
  if (p.cost.empty()) {
    bool ok = std::all_of(lp.rhs.begin(), lp.rhs.end(), [](double r) { return r >= -1e-9; });
    s.status = ok ? LpStatus::Optimal : LpStatus::Infeasible;
    return s;
  }
  LpResult r = solve_min(p);
  s.status = r.status;
  if (r.status != LpStatus::Optimal) return s;
  s.x.assign(r.x.begin(), r.x.begin() + static_cast<std::ptrdiff_t>(n));
  for (double& v : s.x)
    if (v < 1e-9) v = 0.0;
  s.objective = 0;
  for (double v : s.x) s.objective += v;
  std::map<std::size_t, double> delta;
  for (const auto& g : lp.groups) {
    double total = 0;
    for (std::size_t v : g.vars) total += s.x[v];
    if (total <= 0) continue;
    for (auto [u, share] : g.gens) delta[u] -= total * share;
  }
  for (std::size_t i = 0; i < m; ++i) {
    double d = r.x[n + i] - r.x[n + m + i];
    if (std::abs(d) > 1e-9) delta[lp.gens[i]] += d;
  }
  s.redispatch.assign(delta.begin(), delta.end());
  return s;
}

ApplyResult apply_control(const grid::GridCase& c, const ShedSolution& sol) {
  if (sol.status != LpStatus::Optimal) throw Error("cannot apply a non-optimal solution");
  ApplyResult r;
  r.grid = c;
  double total = 0;
  for (std::size_t v = 0; v < sol.buses.size(); ++v) {
    double& load = r.grid.buses[sol.buses[v]].load_mw;
    double shed = std::clamp(sol.x[v], 0.0, std::max(0.0, load));
    load -= shed;
    total += shed;
  }
  r.mw_lost_control = total;
  if (total <= 0 && sol.redispatch.empty()) return r;
  // Planned moves scaled to the load actually shed.
  double planned = 0;
  for (double v : sol.x) planned += v;
  double scale = planned > 0 ? total / planned : 1.0;
  double moved = 0;
  for (auto [u, d] : sol.redispatch) {
    auto& g = r.grid.gens[u];
    if (!g.in_service) continue;
    double want = d * scale;
    double take = want < 0 ? std::max(want, std::min(0.0, g.p_min - g.p_mw))
                           : std::min(want, std::max(0.0, g.p_max - g.p_mw));
    g.p_mw += take;
    moved += take;
  }
  if (std::abs(total + moved) > 1e-6) {
    r.fallback = true;
    auto rb = grid::rebalance_all(r.grid);
    r.grid = std::move(rb.grid);
    r.fallback_lost = rb.mw_lost;
  }
  return r;
}

std::vector<double> injection_change(const grid::GridCase& c, const ShedSolution& sol) {
  std::vector<double> d(c.buses.size(), 0.0);
  for (std::size_t v = 0; v < sol.buses.size(); ++v) d[sol.buses[v]] += sol.x[v];
  for (auto [u, delta] : sol.redispatch) d[c.gens[u].bus_index] += delta;
  return d;
}

void write_shed_csv(std::ostream& out, const grid::GridCase& c,
                    const std::vector<ShedSolution>& sols) {
  out << "node,bus,shed_mw\n";
  char buf[96];
  for (const auto& s : sols)
    for (std::size_t v = 0; v < s.buses.size(); ++v) {
      if (s.x.empty() || s.x[v] <= 0) continue;
      std::snprintf(buf, sizeof buf, "%d,%d,%.6f\n", s.node, c.buses[s.buses[v]].id, s.x[v]);
      out << buf;
    }
}

void write_redispatch_csv(std::ostream& out, const std::vector<ShedSolution>& sols) {
  out << "node,gen,redispatch_mw\n";
  char buf[96];
  for (const auto& s : sols)
    for (auto [u, d] : s.redispatch) {
      std::snprintf(buf, sizeof buf, "%d,%zu,%.6f\n", s.node, u + 1, d);
      out << buf;
    }
}

}  // namespace desgrid::shed
