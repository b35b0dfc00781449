#include "desgrid/cascade/engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "desgrid/error.hpp"
#include "desgrid/grid/rebalance.hpp"
#include "modular_runtime.hpp"

namespace desgrid::cascade {

const char* mode_name(ControlMode m) {
  switch (m) {
    case ControlMode::None: return "none";
    case ControlMode::Modular: return "modular";
    case ControlMode::CentralEmergency: return "central";
  }
  return "?";
}

ControlMode parse_mode(std::string_view text) {
  if (text == "none" || text == "None") return ControlMode::None;
  if (text == "modular" || text == "Modular") return ControlMode::Modular;
  if (text == "central" || text == "CentralEmergency" || text == "central-emergency")
    return ControlMode::CentralEmergency;
  throw Error("unknown control mode '" + std::string(text) + "'");
}

void schedule_with_delay(ActionQueue& queue, PendingAction action, int now, int delay_ticks) {
  if (delay_ticks < 0) throw Error("delay must be non-negative");
  action.issue_tick = now;
  action.due_tick = now + delay_ticks;
  auto pos = std::upper_bound(queue.begin(), queue.end(), action.due_tick,
                              [](int due, const PendingAction& a) { return due < a.due_tick; });
  queue.insert(pos, std::move(action));
}

std::vector<int> trip_overloaded_lines(const grid::GridCase& c, const grid::FlowSolution& f,
                                       double margin_mw) {
  std::vector<int> out;
  for (std::size_t k = 0; k < c.branches.size(); ++k) {
    const auto& br = c.branches[k];
    if (br.in_service && std::abs(f.flows[k]) > br.rating_mw + margin_mw)
      out.push_back(grid::GridCase::branch_id(k));
  }
  return out;
}

shed::ShedSolution central_emergency_control(const grid::GridCase& c, const grid::FlowSolution& f) {
  auto ptdf = grid::network_ptdf(c);
  auto sol = shed::solve_lp(shed::formulate_global_lp(c, f, ptdf));
  if (sol.status == shed::LpStatus::Optimal) return sol;
  // Keep only the violated branches when the full problem has no solution.
  auto lp = shed::formulate_global_lp(c, f, ptdf);
  shed::ShedLP reduced = lp;
  reduced.flow_rows.clear();
  reduced.rhs.clear();
  reduced.row_branches.clear();
  for (std::size_t r = 0; r < lp.rhs.size(); ++r)
    if (lp.rhs[r] < 0) {
      reduced.flow_rows.push_back(lp.flow_rows[r]);
      reduced.rhs.push_back(lp.rhs[r]);
      reduced.row_branches.push_back(lp.row_branches[r]);
    }
  return shed::solve_lp(reduced);
}

void validate_scenario(const grid::GridCase& c, const ScenarioConfig& s) {
  if (!s.initial_outage.empty()) {
    if (s.initial_outage.size() != 2) throw Error("initial outage must name two branches");
    if (s.initial_outage[0] == s.initial_outage[1]) throw Error("initial outage branches must differ");
    for (int id : s.initial_outage)
      if (!c.branches[c.branch_index(id)].in_service)
        throw Error("branch " + std::to_string(id) + " is already out of service");
  }
  if (!s.load_multipliers.empty()) {
    if (s.load_multipliers.size() != c.buses.size()) throw Error("one load multiplier per bus required");
    for (double m : s.load_multipliers)
      if (!(m >= 0)) throw Error("load multipliers must be non-negative");
  }
  if (s.delay_ticks < 0) throw Error("delay must be non-negative");
  if (s.max_ticks < 1) throw Error("max_ticks must be positive");
}

namespace {

class Simulation {
 public:
  Simulation(const grid::GridCase& prepared, const ScenarioConfig& s,
             const modular::SupervisorLibrary* lib, const EngineOptions& options)
      : grid_(prepared), scenario_(s), options_(options) {
    validate_scenario(prepared, s);
    if (s.mode == ControlMode::Modular) {
      if (!lib) throw Error("modular mode requires controllers");
      runtime_.emplace(*lib, options);
      model_ = &lib->model();
    }
    if (!s.load_multipliers.empty())
      for (std::size_t b = 0; b < grid_.buses.size(); ++b) grid_.buses[b].load_mw *= s.load_multipliers[b];
  }

  CascadeTrace run() {
    for (int tick = 1;; ++tick) {
      if (tick > scenario_.max_ticks) {
        trace_.terminated = Termination::TickCap;
        break;
      }
      trace_.ticks = tick;
      rebalance(tick);
      std::vector<int> trips = trip_overloaded_lines(grid_, flows_, options_.trip_margin_mw);
      if (options_.single_worst_trip && trips.size() > 1) {
        auto worst = *std::max_element(trips.begin(), trips.end(), [&](int a, int b) {
          double la = grid::loading(grid_, flows_, grid_.branch_index(a));
          double lb = grid::loading(grid_, flows_, grid_.branch_index(b));
          return la < lb || (la == lb && a > b);
        });
        trips = {worst};
      }
      if (tick == 1) {
        std::set<int> all(trips.begin(), trips.end());
        all.insert(scenario_.initial_outage.begin(), scenario_.initial_outage.end());
        trips.assign(all.begin(), all.end());
      }
      if (trips.empty() && queue_.empty()) break;
      if (!trips.empty()) {
        for (int id : trips) {
          std::size_t k = grid_.branch_index(id);
          trace_.events.push_back({tick, TraceKind::LineTrip, id, std::abs(flows_.flows[k])});
          grid_.branches[k].in_service = false;
          ++trace_.line_trip_count;
          emit_line_trip(k);
        }
        rebalance(tick);
        react(tick, trips);
      }
      apply_due(tick);
    }
    trace_.mw_lost_total = trace_.mw_lost_rebalance + trace_.mw_lost_control;
    if (runtime_) {
      trace_.des_events = runtime_->emitted();
      trace_.supervisor_exits = runtime_->exits();
    }
    return trace_;
  }

 private:
  void emit(std::optional<std::size_t> comp, des::EventRole role) {
    if (runtime_ && comp) runtime_->emit(model_->event(*comp, role));
  }
  void emit_line_trip(std::size_t k) {
    if (model_) emit(model_->line_component(k), des::EventRole::Trip);
  }

  void rebalance(int tick) {
    auto r = grid::rebalance_all(grid_);
    for (std::size_t g : r.tripped_gens) {
      trace_.events.push_back({tick, TraceKind::GenTrip, static_cast<int>(g) + 1, grid_.gens[g].p_mw});
      if (model_) emit(model_->gen_component(g), des::EventRole::Trip);
    }
    for (auto [bus, mw] : r.island_losses)
      trace_.events.push_back({tick, TraceKind::Rebalance, grid_.buses[bus].id, mw});
    for (std::size_t b : r.lost_load_buses)
      if (model_) emit(model_->load_component(b), des::EventRole::Trip);
    trace_.mw_lost_rebalance += r.mw_lost;
    grid_ = std::move(r.grid);
    flows_ = grid::dc_power_flow(grid_);
  }

  void react(int tick, const std::vector<int>& trips) {
    if (scenario_.mode == ControlMode::None) return;
    if (scenario_.mode == ControlMode::CentralEmergency) {
      if (trip_overloaded_lines(grid_, flows_, options_.trip_margin_mw).empty()) return;
      auto sol = central_emergency_control(grid_, flows_);
      if (sol.status != shed::LpStatus::Optimal) return;
      if (sol.objective <= 1e-6 && sol.redispatch.empty()) return;
      schedule_with_delay(queue_, {tick, tick, std::move(sol), {}}, tick, 0);
      return;
    }
    // Plan against the grid as it will be once pending actions land.
    grid::GridCase planning = grid_;
    for (const auto& a : queue_) planning = shed::apply_control(planning, a.action).grid;
    for (auto& a : runtime_->react(tick, trips, std::move(planning), trace_))
      schedule_with_delay(queue_, std::move(a), tick, scenario_.delay_ticks);
  }

  void apply_due(int tick) {
    bool applied = false;
    while (!queue_.empty() && queue_.front().due_tick <= tick) {
      PendingAction a = std::move(queue_.front());
      queue_.erase(queue_.begin());
      std::vector<double> before(a.action.buses.size());
      for (std::size_t v = 0; v < a.action.buses.size(); ++v)
        before[v] = grid_.buses[a.action.buses[v]].load_mw;
      auto r = shed::apply_control(grid_, a.action);
      for (std::size_t v = 0; v < a.action.buses.size(); ++v) {
        double shed = before[v] - r.grid.buses[a.action.buses[v]].load_mw;
        if (shed > 0)
          trace_.events.push_back({tick, TraceKind::LoadShed, grid_.buses[a.action.buses[v]].id, shed});
      }
      for (auto [u, d] : a.action.redispatch)
        trace_.events.push_back({tick, TraceKind::Redispatch, static_cast<int>(u) + 1, d});
      if (r.fallback_lost > 0) trace_.events.push_back({tick, TraceKind::Rebalance, 0, r.fallback_lost});
      trace_.mw_lost_control += r.mw_lost_control;
      trace_.mw_lost_rebalance += r.fallback_lost;
      grid_ = std::move(r.grid);
      if (runtime_)
        for (des::EventId e : a.forced) runtime_->emit(e);
      applied = true;
    }
    if (applied) flows_ = grid::dc_power_flow(grid_);
  }

  grid::GridCase grid_;
  grid::FlowSolution flows_;
  ScenarioConfig scenario_;
  EngineOptions options_;
  std::optional<detail::ModularRuntime> runtime_;
  const modular::GridDesModel* model_ = nullptr;
  ActionQueue queue_;
  CascadeTrace trace_;
};

}  // namespace

CascadeTrace run_cascade(const grid::GridCase& prepared, const ScenarioConfig& scenario,
                         const modular::SupervisorLibrary* controllers,
                         const EngineOptions& options) {
  return Simulation(prepared, scenario, controllers, options).run();
}

}  // namespace desgrid::cascade
