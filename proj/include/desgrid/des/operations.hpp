#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "desgrid/des/automaton.hpp"

namespace desgrid::des {

// Synchronous product, trimmed. Labels join component labels with '|'.
Automaton parallel_compose(const Automaton& a, const Automaton& b);
Automaton compose_all(const std::vector<Automaton>& components);

EventSet active_events(const Automaton& a, StateId q);

std::optional<StateId> run(const Automaton& a, const EventString& s);
std::optional<StateId> run_from(const Automaton& a, StateId q, const EventString& s);

EventString project(const EventString& s, const EventSet& sub_alphabet);

std::set<EventString> language_upto(const Automaton& a, std::size_t n);

// Deterministic automaton generating the projection of L(a) onto sub_alphabet.
Automaton project_automaton(const Automaton& a, const EventSet& sub_alphabet);

// Strings as space-separated labels; the empty string prints as "ε".
std::string format_string(const EventTable& events, const EventString& s);
EventString parse_string(const EventTable& events, std::string_view text);

}  // namespace desgrid::des
