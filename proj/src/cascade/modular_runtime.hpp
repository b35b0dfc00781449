#pragma once

#include <optional>
#include <vector>

#include "desgrid/cascade/engine.hpp"

namespace desgrid::cascade::detail {

// Runtime side of the modular controllers for one simulation: members are
// created on first use and replay the global event string so far.
class ModularRuntime {
 public:
  ModularRuntime(const modular::SupervisorLibrary& lib, const EngineOptions& options);

  void emit(des::EventId e);
  const des::EventString& emitted() const { return emitted_; }

  // Shed/redispatch actions of the nodes that observe the given trips.
  // `planning` already includes every pending action.
  std::vector<PendingAction> react(int tick, const std::vector<int>& tripped_branch_ids,
                                   grid::GridCase planning, CascadeTrace& trace);

  int exits();

 private:
  modular::ModularSupervisor& member(int node);
  bool enabled_by_all(des::EventId e);

  const modular::SupervisorLibrary& lib_;
  EngineOptions options_;
  std::vector<std::optional<modular::ModularSupervisor>> members_;
  des::EventString emitted_;
};

}  // namespace desgrid::cascade::detail
