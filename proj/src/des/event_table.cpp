#include "desgrid/des/event_table.hpp"

#include "desgrid/error.hpp"

namespace desgrid::des {

EventId EventTable::add(std::string label, bool controllable, bool forcible) {
  if (label.empty()) throw Error("event label must be non-empty");
  if (index_.count(label)) throw Error("duplicate event label '" + label + "'");
  auto id = static_cast<EventId>(entries_.size());
  index_.emplace(label, id);
  entries_.push_back({std::move(label), controllable, forcible});
  return id;
}

EventId EventTable::intern(std::string label, bool controllable, bool forcible) {
  if (auto id = find(label)) {
    const auto& e = entries_[*id];
    if (e.controllable != controllable || e.forcible != forcible)
      throw Error("event '" + label + "' registered with different attributes");
    return *id;
  }
  return add(std::move(label), controllable, forcible);
}

std::optional<EventId> EventTable::find(std::string_view label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EventId EventTable::at(std::string_view label) const {
  auto id = find(label);
  if (!id) throw Error("unknown event '" + std::string(label) + "'");
  return *id;
}

void EventTable::set_attributes(EventId id, bool controllable, bool forcible) {
  auto& e = entries_.at(id);
  e.controllable = controllable;
  e.forcible = forcible;
}

}  // namespace desgrid::des
