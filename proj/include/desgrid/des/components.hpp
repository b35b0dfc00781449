#pragma once

#include <memory>
#include <string>

#include "desgrid/des/automaton.hpp"

namespace desgrid::des {

enum class ComponentType { Load, Line, Generator };

struct ComponentKind {
  ComponentType type;
  int index;
};

enum class EventRole { Trip, Change, Restore };

// "D01", "L12", "G05": zero-padded to at least two digits.
std::string component_name(ComponentKind kind);
// "e1", "k12", "b5".
std::string event_label(ComponentKind kind, EventRole role);
const char* type_name(ComponentType type);

// Two states N (initial) and T. Registers the three events of the component
// in the table; a repeated (type, index) is an error.
Automaton build_component(const std::shared_ptr<EventTable>& table, ComponentKind kind);

}  // namespace desgrid::des
