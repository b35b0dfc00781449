#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "desgrid/des/event_table.hpp"

namespace desgrid::des {

using StateId = std::uint32_t;
inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();

// Sorted, duplicate-free list of event ids.
using EventSet = std::vector<EventId>;
using EventString = std::vector<EventId>;

struct Transition {
  EventId event;
  StateId target;
};

// Deterministic automaton with a partial transition function. Immutable once
// built; an automaton with zero states stands for the empty language.
class Automaton {
 public:
  Automaton() = default;

  const std::string& name() const { return name_; }
  const std::shared_ptr<const EventTable>& events() const { return events_; }

  bool empty() const { return labels_.empty(); }
  std::size_t state_count() const { return labels_.size(); }
  std::size_t transition_count() const { return transitions_.size(); }
  StateId initial() const;

  const std::string& state_label(StateId q) const;
  std::optional<StateId> find_state(std::string_view label) const;

  const EventSet& alphabet() const { return alphabet_; }
  bool in_alphabet(EventId e) const;

  // Outgoing transitions of q, sorted by event id.
  std::span<const Transition> transitions(StateId q) const;
  std::optional<StateId> next(StateId q, EventId e) const;

  Automaton renamed(std::string name) const;
  // Same structure over another table that agrees on every alphabet label.
  Automaton rebind(std::shared_ptr<const EventTable> events) const;

 private:
  friend class AutomatonBuilder;

  void check_state(StateId q) const;

  std::string name_;
  std::shared_ptr<const EventTable> events_;
  EventSet alphabet_;
  std::vector<std::string> labels_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Transition> transitions_;
};

class AutomatonBuilder {
 public:
  AutomatonBuilder(std::string name, std::shared_ptr<const EventTable> events);

  void add_event(EventId e);
  StateId add_state(std::string label);
  void set_initial(StateId q);
  // Throws if (src, e) already has a different successor.
  void add_transition(StateId src, EventId e, StateId dst);

  std::size_t state_count() const { return labels_.size(); }

  // With trim, unreachable states are dropped and ids renumbered in
  // breadth-first order from the initial state.
  Automaton build(bool trim = true);

 private:
  std::string name_;
  std::shared_ptr<const EventTable> events_;
  std::vector<bool> in_alphabet_;
  std::vector<std::string> labels_;
  std::vector<std::vector<Transition>> out_;
  StateId initial_ = kNoState;
};

// EventSet helpers.
bool contains(const EventSet& s, EventId e);
EventSet set_union(const EventSet& a, const EventSet& b);
EventSet set_intersection(const EventSet& a, const EventSet& b);
EventSet set_difference(const EventSet& a, const EventSet& b);
EventSet make_event_set(std::vector<EventId> events);

}  // namespace desgrid::des
