#include "desgrid/des/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "desgrid/error.hpp"

namespace desgrid::des {

std::string write_automaton(const Automaton& a) {
  const EventTable& ev = *a.events();
  std::ostringstream out;
  out << "automaton " << a.name() << "\n";

  std::vector<EventId> events(a.alphabet().begin(), a.alphabet().end());
  std::sort(events.begin(), events.end(),
            [&](EventId x, EventId y) { return ev.label(x) < ev.label(y); });
  out << "events:\n";
  for (EventId e : events)
    out << ev.label(e) << (ev.controllable(e) ? " controllable" : " uncontrollable")
        << (ev.forcible(e) ? " forcible" : " unforcible") << "\n";

  std::vector<StateId> states(a.state_count());
  for (StateId q = 0; q < states.size(); ++q) states[q] = q;
  std::sort(states.begin(), states.end(),
            [&](StateId x, StateId y) { return a.state_label(x) < a.state_label(y); });
  out << "states:\n";
  for (StateId q : states) {
    out << a.state_label(q);
    if (q == a.initial()) out << " initial";
    out << "\n";
  }

  std::vector<std::tuple<const std::string*, const std::string*, const std::string*>> rows;
  for (StateId q = 0; q < a.state_count(); ++q)
    for (const auto& t : a.transitions(q))
      rows.emplace_back(&a.state_label(q), &ev.label(t.event), &a.state_label(t.target));
  std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
    auto key = [](const auto& r) {
      return std::tie(*std::get<0>(r), *std::get<1>(r), *std::get<2>(r));
    };
    return key(x) < key(y);
  });
  out << "transitions:\n";
  for (const auto& [s, e, d] : rows) out << *s << " " << *e << " " << *d << "\n";
  return out.str();
}

Automaton read_automaton(std::string_view text, const std::shared_ptr<EventTable>& table) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  enum class Section { Header, Events, States, Transitions } section = Section::Header;

  std::optional<AutomatonBuilder> builder;
  std::map<std::string, StateId, std::less<>> states;
  bool has_initial = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);

    if (section == Section::Header) {
      if (line.rfind("automaton ", 0) != 0 || line.size() <= 10)
        throw ParseError("expected 'automaton <name>'", line_no);
      builder.emplace(line.substr(10), table);
      section = Section::Events;
      if (!std::getline(in, line) || (++line_no, line != "events:"))
        throw ParseError("expected 'events:'", line_no);
      continue;
    }
    if (line == "states:") {
      if (section != Section::Events) throw ParseError("unexpected 'states:'", line_no);
      section = Section::States;
      continue;
    }
    if (line == "transitions:") {
      if (section != Section::States) throw ParseError("unexpected 'transitions:'", line_no);
      section = Section::Transitions;
      continue;
    }
    switch (section) {
      case Section::Events: {
        if (tok.size() != 3) throw ParseError("malformed event line", line_no);
        bool c = tok[1] == "controllable";
        bool f = tok[2] == "forcible";
        if ((!c && tok[1] != "uncontrollable") || (!f && tok[2] != "unforcible"))
          throw ParseError("bad event attributes", line_no);
        try {
          builder->add_event(table->intern(tok[0], c, f));
        } catch (const Error& e) {
          throw ParseError(e.what(), line_no);
        }
        break;
      }
      case Section::States: {
        if (tok.empty() || tok.size() > 2 || (tok.size() == 2 && tok[1] != "initial"))
          throw ParseError("malformed state line", line_no);
        if (states.count(tok[0])) throw ParseError("duplicate state '" + tok[0] + "'", line_no);
        StateId q = builder->add_state(tok[0]);
        states.emplace(tok[0], q);
        if (tok.size() == 2) {
          if (has_initial) throw ParseError("second initial state", line_no);
          builder->set_initial(q);
          has_initial = true;
        }
        break;
      }
      case Section::Transitions: {
        if (tok.size() != 3) throw ParseError("malformed transition line", line_no);
        auto s = states.find(tok[0]);
        auto d = states.find(tok[2]);
        if (s == states.end() || d == states.end())
          throw ParseError("transition references unknown state", line_no);
        auto e = table->find(tok[1]);
        if (!e) throw ParseError("unknown event '" + tok[1] + "'", line_no);
        try {
          builder->add_transition(s->second, *e, d->second);
        } catch (const Error& err) {
          throw ParseError(err.what(), line_no);
        }
        break;
      }
      default:
        throw ParseError("unexpected content", line_no);
    }
  }
  if (!builder) throw ParseError("missing header", line_no);
  if (section != Section::Transitions) throw ParseError("missing sections", line_no);
  if (!states.empty() && !has_initial) throw ParseError("no initial state", line_no);
  return builder->build(false);
}

void save_automaton(const Automaton& a, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << write_automaton(a);
  if (!out) throw Error("write failed: " + path.string());
}

Automaton load_automaton(const std::filesystem::path& path,
                         const std::shared_ptr<EventTable>& table) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return read_automaton(buf.str(), table);
}

}  // namespace desgrid::des
