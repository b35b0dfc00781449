#include "desgrid/supervisory/policy.hpp"

#include "desgrid/des/operations.hpp"
#include "desgrid/error.hpp"

namespace desgrid::supervisory {

ControlPattern control_policy(const SupervisorRealization& sup, StateId current,
                              const EventSet& threatened) {
  if (sup.empty()) throw Error("query on an empty supervisor");
  const Automaton& r = sup.realization;
  const auto& ev = *r.events();
  ControlPattern p;
  p.enabled = des::active_events(r, current);
  bool needed = false;
  for (const auto& t : sup.plant->transitions(sup.plant_state(current))) {
    if (ev.controllable(t.event)) continue;
    if (!des::contains(p.enabled, t.event) || des::contains(threatened, t.event)) needed = true;
  }
  if (needed)
    for (EventId e : p.enabled)
      if (ev.forcible(e)) p.forced.push_back(e);
  return p;
}

bool satisfies_admissibility(const ControlPattern& pattern, const Automaton& plant,
                             StateId plant_state) {
  const auto& ev = *plant.events();
  EventSet active = des::active_events(plant, plant_state);
  bool all_controllable = true;
  for (EventId e : des::set_difference(active, pattern.enabled))
    if (!ev.controllable(e)) all_controllable = false;
  if (all_controllable) return true;
  for (EventId e : des::set_intersection(active, pattern.enabled))
    if (ev.forcible(e)) return true;
  return false;
}

bool is_admissible(const ControlPattern& pattern, const Automaton& plant, StateId plant_state) {
  const auto& ev = *plant.events();
  for (EventId e : pattern.forced)
    if (!ev.forcible(e) || !des::contains(pattern.enabled, e)) return false;
  EventSet active = des::active_events(plant, plant_state);
  bool uncontrollable_disabled = false;
  for (EventId e : des::set_difference(active, pattern.enabled))
    if (!ev.controllable(e)) uncontrollable_disabled = true;
  if (uncontrollable_disabled && des::set_intersection(active, pattern.forced).empty())
    return false;
  return satisfies_admissibility(pattern, plant, plant_state);
}

}  // namespace desgrid::supervisory
