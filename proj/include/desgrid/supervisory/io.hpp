#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "desgrid/supervisory/synthesis.hpp"

namespace desgrid::supervisory {

// Automaton text followed by a "removed:" block of "<state> <witness|->"
// lines in removal order.
std::string write_realization(const SupervisorRealization& sup);

// The plant supplies the state map; its event table receives the events.
SupervisorRealization read_realization(std::string_view text,
                                       std::shared_ptr<const Automaton> plant,
                                       const std::shared_ptr<des::EventTable>& table);

}  // namespace desgrid::supervisory
