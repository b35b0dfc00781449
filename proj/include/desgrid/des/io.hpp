#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "desgrid/des/automaton.hpp"

namespace desgrid::des {

// Canonical text form: events, states and transitions each sorted
// lexicographically by label.
std::string write_automaton(const Automaton& a);

// Events are interned into the table; conflicting attributes are an error.
// Unreachable states are kept so that write(read(text)) == text.
Automaton read_automaton(std::string_view text, const std::shared_ptr<EventTable>& table);

void save_automaton(const Automaton& a, const std::filesystem::path& path);
Automaton load_automaton(const std::filesystem::path& path,
                         const std::shared_ptr<EventTable>& table);

}  // namespace desgrid::des
