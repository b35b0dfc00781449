#pragma once

#include <memory>
#include <vector>

#include "desgrid/des/automaton.hpp"

namespace desgrid::supervisory {

using des::Automaton;
using des::EventId;
using des::EventSet;
using des::EventString;
using des::StateId;

// A sub-automaton H of a plant P together with the map from H's states to
// the plant states they stand for.
class SpecificationAutomaton {
 public:
  // H = P restricted to the legal states, trimmed. Throws if the initial
  // state is illegal.
  static SpecificationAutomaton from_legal_states(std::shared_ptr<const Automaton> plant,
                                                  const std::vector<bool>& legal);
  // Validates that spec embeds into plant from the initial state.
  static SpecificationAutomaton from_automaton(std::shared_ptr<const Automaton> plant,
                                               Automaton spec);

  const Automaton& plant() const { return *plant_; }
  const std::shared_ptr<const Automaton>& plant_ptr() const { return plant_; }
  const Automaton& spec() const { return spec_; }
  StateId plant_state(StateId q) const { return to_plant_.at(q); }
  const std::vector<StateId>& plant_map() const { return to_plant_; }
  // Indexed by plant state.
  std::vector<bool> legal_states() const;

 private:
  SpecificationAutomaton() = default;

  std::shared_ptr<const Automaton> plant_;
  Automaton spec_;
  std::vector<StateId> to_plant_;
};

// Restriction of an automaton to a state mask, trimmed; labels are kept.
// Returns the mapping from new to old ids alongside.
std::pair<Automaton, std::vector<StateId>> restrict_states(const Automaton& a,
                                                           const std::vector<bool>& keep);

}  // namespace desgrid::supervisory
