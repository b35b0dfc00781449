#include <algorithm>
#include <cmath>

#include "desgrid/error.hpp"
#include "modular_runtime.hpp"

namespace desgrid::cascade::detail {

ModularRuntime::ModularRuntime(const modular::SupervisorLibrary& lib, const EngineOptions& options)
    : lib_(lib), options_(options), members_(lib.nodes().size()) {}

modular::ModularSupervisor& ModularRuntime::member(int node) {
  const auto& nodes = lib_.nodes();
  auto slot = static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), node) -
                                       nodes.begin());
  auto& m = members_.at(slot);
  if (!m) {
    m.emplace(lib_.make_supervisor(node));
    for (des::EventId e : emitted_) m->observe(e);
  }
  return *m;
}

void ModularRuntime::emit(des::EventId e) {
  emitted_.push_back(e);
  for (auto& m : members_)
    if (m) m->observe(e);
}

int ModularRuntime::exits() {
  // Members never queried may still have lost track; bring up every listener.
  std::vector<des::EventId> seen(emitted_.begin(), emitted_.end());
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  for (des::EventId e : seen)
    for (int node : lib_.listeners(e)) member(node);
  int n = 0;
  for (const auto& m : members_)
    if (m && !m->tracking()) ++n;
  return n;
}

bool ModularRuntime::enabled_by_all(des::EventId e) {
  for (int node : lib_.listeners(e)) {
    auto p = member(node).pattern();
    if (p && !des::contains(p->enabled, e)) return false;
  }
  return true;
}

std::vector<PendingAction> ModularRuntime::react(int tick,
                                                 const std::vector<int>& tripped_branch_ids,
                                                 grid::GridCase planning, CascadeTrace& trace) {
  const auto& model = lib_.model();
  std::vector<int> notified;
  for (int id : tripped_branch_ids) {
    auto comp = model.line_component(static_cast<std::size_t>(id - 1));
    if (!comp) continue;
    const auto& l = lib_.listeners(model.event(*comp, des::EventRole::Trip));
    notified.insert(notified.end(), l.begin(), l.end());
  }
  std::sort(notified.begin(), notified.end());
  notified.erase(std::unique(notified.begin(), notified.end()), notified.end());

  std::vector<PendingAction> out;
  grid::FlowSolution flows = grid::dc_power_flow(planning);
  std::optional<grid::PTDFMatrix> ptdf;

  for (int node : notified) {
    auto& m = member(node);
    if (!m.tracking()) continue;
    const auto& sub = lib_.subsystem(node);

    shed::Neighborhood hood;
    for (std::size_t k : sub.lines(model))
      if (planning.branches[k].in_service) hood.branches.push_back(k);
    if (hood.branches.empty()) continue;
    std::size_t lc = shed::select_critical_line(planning, flows, hood.branches);

    des::EventSet threatened;
    if (grid::loading(planning, flows, lc) > 1.0)
      threatened.push_back(model.event(*model.line_component(lc), des::EventRole::Trip));
    auto pattern = m.pattern(threatened);
    if (!pattern || pattern->forced.empty()) continue;

    for (des::EventId e : pattern->forced) {
      const auto& ref = model.component(model.owner(e));
      if (ref.kind.type == des::ComponentType::Load) hood.buses.push_back(ref.element);
    }
    if (hood.buses.empty()) continue;
    if (!ptdf) ptdf = grid::network_ptdf(planning);
    shed::LpOptions opts;
    opts.constrain_all_branches = options_.constrain_all_branches;
    auto sol = shed::solve_lp(shed::formulate_local_lp(planning, flows, *ptdf, node, lc, hood, opts));
    if (sol.status != shed::LpStatus::Optimal && opts.constrain_all_branches) {
      opts.constrain_all_branches = false;
      sol = shed::solve_lp(shed::formulate_local_lp(planning, flows, *ptdf, node, lc, hood, opts));
    }
    if (sol.status != shed::LpStatus::Optimal || sol.objective <= 1e-6) continue;

    PendingAction a;
    a.issue_tick = tick;
    for (std::size_t v = 0; v < sol.buses.size(); ++v)
      if (sol.x[v] > 0)
        a.forced.push_back(model.event(*model.load_component(sol.buses[v]), des::EventRole::Change));
    for (auto [u, d] : sol.redispatch)
      if (auto g = model.gen_component(u)) {
        des::EventId e = model.event(*g, des::EventRole::Change);
        if (des::contains(pattern->forced, e)) a.forced.push_back(e);
      }
    a.forced = des::make_event_set(std::move(a.forced));
    bool consistent = true;
    for (des::EventId e : a.forced) consistent = consistent && enabled_by_all(e);
    if (!consistent) {
      ++trace.vetoed_actions;
      continue;
    }
    a.action = std::move(sol);
    // Later nodes plan against the grid with this action in place.
    auto applied = shed::apply_control(planning, a.action);
    planning = std::move(applied.grid);
    flows = grid::dc_power_flow(planning);
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace desgrid::cascade::detail
