#include "desgrid/supervisory/specification.hpp"

#include "desgrid/error.hpp"

namespace desgrid::supervisory {

std::pair<Automaton, std::vector<StateId>> restrict_states(const Automaton& a,
                                                           const std::vector<bool>& keep) {
  des::AutomatonBuilder b(a.name(), a.events());
  for (EventId e : a.alphabet()) b.add_event(e);
  std::vector<StateId> old_of_new;
  if (a.empty() || !keep.at(a.initial())) return {b.build(), old_of_new};

  // Breadth-first over kept states; ids match the trimmed build order.
  std::vector<StateId> id(a.state_count(), des::kNoState);
  auto visit = [&](StateId q) {
    if (id[q] == des::kNoState) {
      id[q] = b.add_state(a.state_label(q));
      old_of_new.push_back(q);
    }
    return id[q];
  };
  b.set_initial(visit(a.initial()));
  for (std::size_t i = 0; i < old_of_new.size(); ++i) {
    StateId q = old_of_new[i];
    for (const auto& t : a.transitions(q))
      if (keep[t.target]) b.add_transition(id[q], t.event, visit(t.target));
  }
  return {b.build(), old_of_new};
}

SpecificationAutomaton SpecificationAutomaton::from_legal_states(
    std::shared_ptr<const Automaton> plant, const std::vector<bool>& legal) {
  if (!plant || plant->empty()) throw Error("specification requires a non-empty plant");
  if (legal.size() != plant->state_count()) throw Error("legal mask size mismatch");
  if (!legal[plant->initial()]) throw Error("initial state is illegal");
  SpecificationAutomaton s;
  auto [spec, map] = restrict_states(*plant, legal);
  s.spec_ = spec.renamed("spec(" + plant->name() + ")");
  s.to_plant_ = std::move(map);
  s.plant_ = std::move(plant);
  return s;
}

SpecificationAutomaton SpecificationAutomaton::from_automaton(
    std::shared_ptr<const Automaton> plant, Automaton spec) {
  if (!plant || plant->empty()) throw Error("specification requires a non-empty plant");
  if (spec.empty()) throw Error("specification must contain the initial state");
  if (spec.events() != plant->events()) throw Error("spec and plant use different event tables");
  for (EventId e : spec.alphabet())
    if (!plant->in_alphabet(e)) throw Error("spec event outside plant alphabet");

  std::vector<StateId> map(spec.state_count(), des::kNoState);
  map[spec.initial()] = plant->initial();
  std::vector<StateId> queue{spec.initial()};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    StateId q = queue[i];
    for (const auto& t : spec.transitions(q)) {
      auto p = plant->next(map[q], t.event);
      if (!p) throw Error("spec transition absent from plant at '" + spec.state_label(q) + "'");
      if (map[t.target] == des::kNoState) {
        map[t.target] = *p;
        queue.push_back(t.target);
      } else if (map[t.target] != *p) {
        throw Error("spec state '" + spec.state_label(t.target) + "' maps to two plant states");
      }
    }
  }
  SpecificationAutomaton s;
  s.plant_ = std::move(plant);
  s.spec_ = std::move(spec);
  s.to_plant_ = std::move(map);
  return s;
}

std::vector<bool> SpecificationAutomaton::legal_states() const {
  std::vector<bool> legal(plant_->state_count(), false);
  for (StateId p : to_plant_) legal[p] = true;
  return legal;
}

}  // namespace desgrid::supervisory
