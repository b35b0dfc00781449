#pragma once

#include "desgrid/supervisory/synthesis.hpp"

namespace desgrid::supervisory {

struct ControlPattern {
  EventSet enabled;
  EventSet forced;

  bool operator==(const ControlPattern&) const = default;
};

// Enabled = events active at the realization state. Forcing is requested
// only when an active uncontrollable plant event leaves the realization or
// is listed as threatened.
ControlPattern control_policy(const SupervisorRealization& sup, StateId current,
                              const EventSet& threatened = {});

// Literal admissibility: every disabled active event is controllable, or
// some enabled active event is forcible.
bool satisfies_admissibility(const ControlPattern& pattern, const Automaton& plant,
                             StateId plant_state);

// Admissibility plus the pattern invariants (forced within enabled and
// forcible; when an uncontrollable event is disabled, a forced event is active).
bool is_admissible(const ControlPattern& pattern, const Automaton& plant, StateId plant_state);

}  // namespace desgrid::supervisory
