#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "desgrid/modular/supervisor.hpp"

namespace desgrid::modular {

struct ConjunctionController {
  std::vector<ModularSupervisor> members;

  // Union of member alphabets.
  des::EventSet alphabet() const;
};

// enabled = intersection over members of S_j(theta_j(s)) united with the
// events outside the member alphabet; forced = union of member forced sets
// restricted to events the conjunction enables.
ControlPattern conjunction(const ConjunctionController& c, const des::EventString& observed);

// Same rule applied to the members' runtime states.
ControlPattern conjunction_now(const ConjunctionController& c);

struct ForcedViolation {
  des::EventString prefix;
  des::EventId event;
  std::size_t member;
};

struct ForcedConsistency {
  bool ok = true;
  std::vector<ForcedViolation> violations;
};

// Every event a member enables, may force and finds active in its plant must
// extend s inside the closed loop, for every closed-loop s up to the bound.
ForcedConsistency check_forced_consistency(const ConjunctionController& c,
                                           const des::Automaton& plant, std::size_t bound);

// Closed-loop language under the conjunction, strings up to the bound.
std::set<des::EventString> closed_loop_language(const ConjunctionController& c,
                                                const des::Automaton& plant, std::size_t bound);

// Bounded check of K = proj_1(K) || ... || proj_n(K) with K the composition
// of the given automata.
bool check_conditional_decomposability(const std::vector<des::Automaton>& spec_automata,
                                       const std::vector<des::EventSet>& alphabets,
                                       std::size_t bound);

struct SafetyReport {
  bool ok = true;
  std::string reason;
};

// Closed loop stays inside L(global_spec), and each member alone on its own
// plant generates exactly its realization's language, all up to the bound.
SafetyReport verify_safety(const ConjunctionController& c, const des::Automaton& plant,
                           const des::Automaton& global_spec, std::size_t bound);

}  // namespace desgrid::modular
