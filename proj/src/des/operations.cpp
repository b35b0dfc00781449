#include "desgrid/des/operations.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "desgrid/error.hpp"

namespace desgrid::des {

Automaton parallel_compose(const Automaton& a, const Automaton& b) {
  if (a.events() != b.events()) throw Error("composition requires one shared event table");
  AutomatonBuilder builder(a.name() + "||" + b.name(), a.events());
  EventSet alphabet = set_union(a.alphabet(), b.alphabet());
  for (EventId e : alphabet) builder.add_event(e);
  if (a.empty() || b.empty()) return builder.build();

  const std::uint64_t nb = b.state_count();
  const std::uint64_t cells = a.state_count() * nb;
  std::vector<StateId> dense;
  std::unordered_map<std::uint64_t, StateId> sparse;
  const bool use_dense = cells <= (std::uint64_t{1} << 24);
  if (use_dense) dense.assign(cells, kNoState);

  std::vector<std::pair<StateId, StateId>> pairs;
  auto id_of = [&](StateId qa, StateId qb) {
    std::uint64_t key = qa * nb + qb;
    StateId* slot;
    if (use_dense) {
      slot = &dense[key];
    } else {
      slot = &sparse.try_emplace(key, kNoState).first->second;
    }
    if (*slot == kNoState) {
      *slot = builder.add_state(a.state_label(qa) + "|" + b.state_label(qb));
      pairs.emplace_back(qa, qb);
    }
    return *slot;
  };

  builder.set_initial(id_of(a.initial(), b.initial()));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [qa, qb] = pairs[i];
    auto src = static_cast<StateId>(i);
    for (const auto& t : a.transitions(qa)) {
      if (b.in_alphabet(t.event)) {
        if (auto nb2 = b.next(qb, t.event)) builder.add_transition(src, t.event, id_of(t.target, *nb2));
      } else {
        builder.add_transition(src, t.event, id_of(t.target, qb));
      }
    }
    for (const auto& t : b.transitions(qb))
      if (!a.in_alphabet(t.event)) builder.add_transition(src, t.event, id_of(qa, t.target));
  }
  return builder.build();
}

Automaton compose_all(const std::vector<Automaton>& components) {
  if (components.empty()) throw Error("compose_all requires at least one automaton");
  Automaton result = components.front();
  for (std::size_t i = 1; i < components.size(); ++i) result = parallel_compose(result, components[i]);
  return result;
}

EventSet active_events(const Automaton& a, StateId q) {
  EventSet r;
  for (const auto& t : a.transitions(q)) r.push_back(t.event);
  return r;
}

std::optional<StateId> run_from(const Automaton& a, StateId q, const EventString& s) {
  for (EventId e : s) {
    auto n = a.next(q, e);
    if (!n) return std::nullopt;
    q = *n;
  }
  return q;
}

std::optional<StateId> run(const Automaton& a, const EventString& s) {
  if (a.empty()) return std::nullopt;
  return run_from(a, a.initial(), s);
}

EventString project(const EventString& s, const EventSet& sub_alphabet) {
  EventString r;
  for (EventId e : s)
    if (contains(sub_alphabet, e)) r.push_back(e);
  return r;
}

std::set<EventString> language_upto(const Automaton& a, std::size_t n) {
  std::set<EventString> out;
  if (a.empty()) return out;
  EventString s;
  auto rec = [&](auto&& self, StateId q) -> void {
    out.insert(s);
    if (s.size() == n) return;
    for (const auto& t : a.transitions(q)) {
      s.push_back(t.event);
      self(self, t.target);
      s.pop_back();
    }
  };
  rec(rec, a.initial());
  return out;
}

namespace {

std::vector<StateId> unobservable_closure(const Automaton& a, std::vector<StateId> set,
                                          const EventSet& sub) {
  std::vector<bool> seen(a.state_count(), false);
  for (StateId q : set) seen[q] = true;
  for (std::size_t i = 0; i < set.size(); ++i)
    for (const auto& t : a.transitions(set[i]))
      if (!contains(sub, t.event) && !seen[t.target]) {
        seen[t.target] = true;
        set.push_back(t.target);
      }
  std::sort(set.begin(), set.end());
  return set;
}

}  // namespace

Automaton project_automaton(const Automaton& a, const EventSet& sub_alphabet) {
  EventSet alphabet = set_intersection(a.alphabet(), sub_alphabet);
  AutomatonBuilder builder("proj(" + a.name() + ")", a.events());
  for (EventId e : alphabet) builder.add_event(e);
  if (a.empty()) return builder.build();

  std::map<std::vector<StateId>, StateId> ids;
  std::vector<std::vector<StateId>> sets;
  auto id_of = [&](std::vector<StateId> set) {
    auto it = ids.find(set);
    if (it != ids.end()) return it->second;
    std::string label = "{";
    for (std::size_t i = 0; i < set.size(); ++i) label += (i ? "," : "") + a.state_label(set[i]);
    label += "}";
    StateId id = builder.add_state(label);
    ids.emplace(set, id);
    sets.push_back(std::move(set));
    return id;
  };
  builder.set_initial(id_of(unobservable_closure(a, {a.initial()}, sub_alphabet)));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (EventId e : alphabet) {
      std::vector<StateId> succ;
      for (StateId q : sets[i])
        if (auto n = a.next(q, e)) succ.push_back(*n);
      if (succ.empty()) continue;
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
      StateId dst = id_of(unobservable_closure(a, std::move(succ), sub_alphabet));
      builder.add_transition(static_cast<StateId>(i), e, dst);
    }
  }
  return builder.build();
}

std::string format_string(const EventTable& events, const EventString& s) {
  if (s.empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ' ';
    out += events.label(s[i]);
  }
  return out;
}

EventString parse_string(const EventTable& events, std::string_view text) {
  EventString s;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok == "ε") continue;
    s.push_back(events.at(tok));
  }
  return s;
}

}  // namespace desgrid::des
