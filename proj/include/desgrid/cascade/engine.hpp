#pragma once

#include <string_view>
#include <vector>

#include "desgrid/cascade/trace.hpp"
#include "desgrid/grid/power_flow.hpp"
#include "desgrid/modular/supervisor.hpp"
#include "desgrid/shed/local_lp.hpp"

namespace desgrid::cascade {

enum class ControlMode { None, Modular, CentralEmergency };

const char* mode_name(ControlMode m);
ControlMode parse_mode(std::string_view text);

struct ScenarioConfig {
  std::vector<int> initial_outage;      // zero or two distinct branch ids
  std::vector<double> load_multipliers;  // per bus; empty means nominal
  ControlMode mode = ControlMode::None;
  int delay_ticks = 0;
  int max_ticks = 100;
};

struct EngineOptions {
  bool constrain_all_branches = true;  // local LP rows: every neighborhood line, or l_c only
  bool single_worst_trip = false;      // trip only the most loaded violator per tick
  double trip_margin_mw = 1e-6;        // |flow| must exceed rating by more than this
};

struct PendingAction {
  int issue_tick = 0;
  int due_tick = 0;
  shed::ShedSolution action;
  des::EventSet forced;
};

using ActionQueue = std::vector<PendingAction>;

// Inserts after every action due at or before the same tick.
void schedule_with_delay(ActionQueue& queue, PendingAction action, int now, int delay_ticks);

// Branch ids of in-service branches whose |flow| exceeds the rating.
std::vector<int> trip_overloaded_lines(const grid::GridCase& c, const grid::FlowSolution& f,
                                       double margin_mw = 1e-6);

// One network-wide shed problem over every load and branch.
shed::ShedSolution central_emergency_control(const grid::GridCase& c, const grid::FlowSolution& f);

void validate_scenario(const grid::GridCase& c, const ScenarioConfig& s);

// `controllers` is required for the modular mode and must be built from the
// same prepared case.
CascadeTrace run_cascade(const grid::GridCase& prepared, const ScenarioConfig& scenario,
                         const modular::SupervisorLibrary* controllers = nullptr,
                         const EngineOptions& options = {});

}  // namespace desgrid::cascade
