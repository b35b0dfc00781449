#include "desgrid/des/automaton.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "desgrid/error.hpp"

namespace desgrid::des {

StateId Automaton::initial() const {
  if (empty()) throw Error("automaton '" + name_ + "' is empty");
  return 0;
}

void Automaton::check_state(StateId q) const {
  if (q >= labels_.size())
    throw Error("unknown state " + std::to_string(q) + " in automaton '" + name_ + "'");
}

const std::string& Automaton::state_label(StateId q) const {
  check_state(q);
  return labels_[q];
}

std::optional<StateId> Automaton::find_state(std::string_view label) const {
  for (StateId q = 0; q < labels_.size(); ++q)
    if (labels_[q] == label) return q;
  return std::nullopt;
}

bool Automaton::in_alphabet(EventId e) const { return contains(alphabet_, e); }

std::span<const Transition> Automaton::transitions(StateId q) const {
  check_state(q);
  return {transitions_.data() + offsets_[q], transitions_.data() + offsets_[q + 1]};
}

std::optional<StateId> Automaton::next(StateId q, EventId e) const {
  auto out = transitions(q);
  auto it = std::lower_bound(out.begin(), out.end(), e,
                             [](const Transition& t, EventId v) { return t.event < v; });
  if (it == out.end() || it->event != e) return std::nullopt;
  return it->target;
}

Automaton Automaton::renamed(std::string name) const {
  Automaton copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

Automaton Automaton::rebind(std::shared_ptr<const EventTable> events) const {
  for (EventId e : alphabet_)
    if (e >= events->size() || events->label(e) != events_->label(e))
      throw Error("event table does not agree on '" + events_->label(e) + "'");
  Automaton copy = *this;
  copy.events_ = std::move(events);
  return copy;
}

AutomatonBuilder::AutomatonBuilder(std::string name, std::shared_ptr<const EventTable> events)
    : name_(std::move(name)), events_(std::move(events)) {
  if (!events_) throw Error("automaton requires an event table");
}

void AutomatonBuilder::add_event(EventId e) {
  if (e >= events_->size()) throw Error("event id outside table");
  if (in_alphabet_.size() <= e) in_alphabet_.resize(e + 1, false);
  in_alphabet_[e] = true;
}

StateId AutomatonBuilder::add_state(std::string label) {
  labels_.push_back(std::move(label));
  out_.emplace_back();
  return static_cast<StateId>(labels_.size() - 1);
}

void AutomatonBuilder::set_initial(StateId q) {
  if (q >= labels_.size()) throw Error("initial state not declared");
  initial_ = q;
}

void AutomatonBuilder::add_transition(StateId src, EventId e, StateId dst) {
  if (src >= labels_.size() || dst >= labels_.size())
    throw Error("transition references an undeclared state");
  if (e >= in_alphabet_.size() || !in_alphabet_[e])
    throw Error("transition event '" + events_->label(e) + "' not in alphabet");
  for (const auto& t : out_[src]) {
    if (t.event != e) continue;
    if (t.target == dst) return;
    throw Error("nondeterministic transition on '" + events_->label(e) + "' from '" +
                labels_[src] + "'");
  }
  out_[src].push_back({e, dst});
}

Automaton AutomatonBuilder::build(bool trim) {
  Automaton a;
  a.name_ = name_;
  a.events_ = events_;
  for (EventId e = 0; e < in_alphabet_.size(); ++e)
    if (in_alphabet_[e]) a.alphabet_.push_back(e);

  {
    std::vector<std::uint32_t> order(labels_.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](auto x, auto y) { return labels_[x] < labels_[y]; });
    for (std::size_t i = 1; i < order.size(); ++i)
      if (labels_[order[i]] == labels_[order[i - 1]])
        throw Error("duplicate state label '" + labels_[order[i]] + "'");
  }

  if (labels_.empty()) {
    a.offsets_.assign(1, 0);
    return a;
  }
  if (initial_ == kNoState) throw Error("automaton '" + name_ + "' has no initial state");

  // New numbering: initial first; trimmed builds use BFS order.
  std::vector<StateId> remap(labels_.size(), kNoState);
  std::vector<StateId> order;
  order.reserve(labels_.size());
  auto visit = [&](StateId q) {
    if (remap[q] != kNoState) return;
    remap[q] = static_cast<StateId>(order.size());
    order.push_back(q);
  };
  visit(initial_);
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto& out = out_[order[i]];
    std::sort(out.begin(), out.end(),
              [](const Transition& x, const Transition& y) { return x.event < y.event; });
    for (const auto& t : out) visit(t.target);
  }
  if (!trim)
    for (StateId q = 0; q < labels_.size(); ++q) visit(q);

  a.labels_.reserve(order.size());
  a.offsets_.reserve(order.size() + 1);
  a.offsets_.push_back(0);
  for (StateId old : order) {
    a.labels_.push_back(std::move(labels_[old]));
    auto& out = out_[old];
    std::sort(out.begin(), out.end(),
              [](const Transition& x, const Transition& y) { return x.event < y.event; });
    for (const auto& t : out) a.transitions_.push_back({t.event, remap[t.target]});
    a.offsets_.push_back(static_cast<std::uint32_t>(a.transitions_.size()));
  }
  labels_.clear();
  out_.clear();
  initial_ = kNoState;
  return a;
}

bool contains(const EventSet& s, EventId e) { return std::binary_search(s.begin(), s.end(), e); }

EventSet set_union(const EventSet& a, const EventSet& b) {
  EventSet r;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

EventSet set_intersection(const EventSet& a, const EventSet& b) {
  EventSet r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

EventSet set_difference(const EventSet& a, const EventSet& b) {
  EventSet r;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

EventSet make_event_set(std::vector<EventId> events) {
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());
  return events;
}

}  // namespace desgrid::des
