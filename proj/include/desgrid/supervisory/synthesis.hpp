#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "desgrid/supervisory/specification.hpp"

namespace desgrid::supervisory {

struct RemovedState {
  std::string state;
  // Uncontrollable event leading out of the specification; empty when the
  // state was dropped because it became unreachable.
  std::optional<EventId> witness;
  std::size_t iteration = 0;
};

struct SupervisorRealization {
  std::shared_ptr<const Automaton> plant;
  Automaton realization;
  std::vector<StateId> to_plant;
  std::vector<RemovedState> removed;
  std::size_t iterations = 0;

  bool empty() const { return realization.empty(); }
  StateId plant_state(StateId q) const { return to_plant.at(q); }
  // The realization viewed as a specification of the same plant.
  SpecificationAutomaton as_specification() const;
};

struct Counterexample {
  EventString prefix;
  EventId event;
};

struct FControllability {
  bool ok = true;
  std::optional<Counterexample> counterexample;
};

FControllability check_f_controllable(const SpecificationAutomaton& spec);

// Spec state ids, ascending.
std::vector<StateId> find_bad_states(const SpecificationAutomaton& spec);

SupervisorRealization supremal_f_controllable(const SpecificationAutomaton& spec);

// Classical synthesis that ignores forcing (only disablement).
SupervisorRealization supremal_controllable(const SpecificationAutomaton& spec);

}  // namespace desgrid::supervisory
