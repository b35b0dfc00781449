#include "desgrid/des/components.hpp"

#include <cstdio>

#include "desgrid/error.hpp"

namespace desgrid::des {

namespace {

char prefix(ComponentType t) {
  switch (t) {
    case ComponentType::Load: return 'D';
    case ComponentType::Line: return 'L';
    case ComponentType::Generator: return 'G';
  }
  return '?';
}

// Table of event letters per type: trip, change, restore.
const char* letters(ComponentType t) {
  switch (t) {
    case ComponentType::Load: return "efg";
    case ComponentType::Line: return "kuh";
    case ComponentType::Generator: return "abc";
  }
  return "???";
}

}  // namespace

const char* type_name(ComponentType type) {
  switch (type) {
    case ComponentType::Load: return "load";
    case ComponentType::Line: return "line";
    case ComponentType::Generator: return "generator";
  }
  return "?";
}

std::string component_name(ComponentKind kind) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%02d", prefix(kind.type), kind.index);
  return buf;
}

std::string event_label(ComponentKind kind, EventRole role) {
  return letters(kind.type)[static_cast<int>(role)] + std::to_string(kind.index);
}

Automaton build_component(const std::shared_ptr<EventTable>& table, ComponentKind kind) {
  if (kind.index < 1) throw Error("component index must be positive");
  std::string trip = event_label(kind, EventRole::Trip);
  if (table->find(trip))
    throw Error(std::string(type_name(kind.type)) + " " + std::to_string(kind.index) +
                " already registered");
  // Only the change events of loads and generators can be disabled or forced.
  bool actuated = kind.type != ComponentType::Line;
  EventId t = table->add(trip, false, false);
  EventId c = table->add(event_label(kind, EventRole::Change), actuated, actuated);
  EventId r = table->add(event_label(kind, EventRole::Restore), false, false);

  std::string name = component_name(kind);
  AutomatonBuilder b(name, table);
  for (EventId e : {t, c, r}) b.add_event(e);
  StateId n = b.add_state(name + "N");
  StateId x = b.add_state(name + "T");
  b.set_initial(n);
  b.add_transition(n, t, x);
  b.add_transition(x, r, n);
  b.add_transition(n, c, n);
  return b.build();
}

}  // namespace desgrid::des
