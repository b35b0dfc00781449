#include "desgrid/supervisory/io.hpp"

#include <sstream>

#include "desgrid/des/io.hpp"
#include "desgrid/error.hpp"

namespace desgrid::supervisory {

std::string write_realization(const SupervisorRealization& sup) {
  std::string out = des::write_automaton(sup.realization);
  out += "removed:\n";
  const auto& ev = *sup.plant->events();
  for (const auto& r : sup.removed)
    out += r.state + " " + (r.witness ? ev.label(*r.witness) : std::string("-")) + " " +
           std::to_string(r.iteration) + "\n";
  return out;
}

SupervisorRealization read_realization(std::string_view text,
                                       std::shared_ptr<const Automaton> plant,
                                       const std::shared_ptr<des::EventTable>& table) {
  auto pos = text.find("\nremoved:\n");
  if (pos == std::string_view::npos) throw Error("realization lacks a 'removed:' block");
  Automaton a = des::read_automaton(text.substr(0, pos + 1), table);

  SupervisorRealization sup;
  sup.plant = plant;
  sup.realization = a;
  if (!a.empty()) sup.to_plant = SpecificationAutomaton::from_automaton(plant, a).plant_map();

  std::size_t line_no = 1;
  for (char c : text.substr(0, pos + 1)) line_no += c == '\n';
  std::istringstream in{std::string(text.substr(pos + 10))};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    RemovedState r;
    std::string w;
    if (!(ls >> r.state >> w >> r.iteration)) throw ParseError("malformed removed entry", line_no);
    if (w != "-") {
      auto id = table->find(w);
      if (!id) throw ParseError("unknown witness event '" + w + "'", line_no);
      r.witness = *id;
    }
    sup.iterations = std::max(sup.iterations, r.iteration);
    sup.removed.push_back(std::move(r));
  }
  return sup;
}

}  // namespace desgrid::supervisory
