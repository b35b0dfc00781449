#include "desgrid/modular/conjunction.hpp"

#include "desgrid/des/operations.hpp"
#include "desgrid/error.hpp"

namespace desgrid::modular {

namespace {

ControlPattern combine(const ConjunctionController& c,
                       const std::vector<ControlPattern>& patterns) {
  des::EventSet sigma = c.alphabet();
  ControlPattern out;
  out.enabled = sigma;
  des::EventSet forced;
  for (std::size_t j = 0; j < c.members.size(); ++j) {
    des::EventSet allowed =
        des::set_union(patterns[j].enabled, des::set_difference(sigma, c.members[j].alphabet()));
    out.enabled = des::set_intersection(out.enabled, allowed);
    forced = des::set_union(forced, patterns[j].forced);
  }
  out.forced = des::set_intersection(forced, out.enabled);
  return out;
}

}  // namespace

des::EventSet ConjunctionController::alphabet() const {
  des::EventSet s;
  for (const auto& m : members) s = des::set_union(s, m.alphabet());
  return s;
}

ControlPattern conjunction(const ConjunctionController& c, const des::EventString& observed) {
  std::vector<ControlPattern> patterns;
  for (const auto& m : c.members)
    patterns.push_back(m.pattern_at(des::project(observed, m.alphabet())));
  return combine(c, patterns);
}

ControlPattern conjunction_now(const ConjunctionController& c) {
  std::vector<ControlPattern> patterns;
  for (const auto& m : c.members) {
    auto p = m.pattern();
    if (!p) throw Error("node " + std::to_string(m.node()) + " lost track of its projection");
    patterns.push_back(*p);
  }
  return combine(c, patterns);
}

std::set<des::EventString> closed_loop_language(const ConjunctionController& c,
                                                const des::Automaton& plant, std::size_t bound) {
  std::set<des::EventString> out;
  if (plant.empty()) return out;
  des::EventString s;
  auto rec = [&](auto&& self, des::StateId q) -> void {
    out.insert(s);
    if (s.size() == bound) return;
    ControlPattern p = conjunction(c, s);
    for (const auto& t : plant.transitions(q)) {
      if (!des::contains(p.enabled, t.event)) continue;
      s.push_back(t.event);
      self(self, t.target);
      s.pop_back();
    }
  };
  rec(rec, plant.initial());
  return out;
}

ForcedConsistency check_forced_consistency(const ConjunctionController& c,
                                           const des::Automaton& plant, std::size_t bound) {
  ForcedConsistency r;
  const auto& ev = *plant.events();
  for (const auto& s : closed_loop_language(c, plant, bound)) {
    auto q = des::run(plant, s);
    ControlPattern global = conjunction(c, s);
    for (std::size_t j = 0; j < c.members.size(); ++j) {
      const auto& m = c.members[j];
      des::EventString local = des::project(s, m.alphabet());
      ControlPattern pj = m.pattern_at(local);
      des::EventSet active = m.plant_active_at(local);
      for (des::EventId e : des::set_intersection(pj.enabled, active)) {
        if (!ev.forcible(e)) continue;
        if (des::contains(global.enabled, e) && plant.next(*q, e)) continue;
        r.ok = false;
        r.violations.push_back({s, e, j});
      }
    }
  }
  return r;
}

bool check_conditional_decomposability(const std::vector<des::Automaton>& spec_automata,
                                       const std::vector<des::EventSet>& alphabets,
                                       std::size_t bound) {
  if (spec_automata.empty()) throw Error("no specification automata");
  des::Automaton k = des::compose_all(spec_automata);
  std::vector<des::Automaton> parts;
  for (const auto& a : alphabets) parts.push_back(des::project_automaton(k, a));
  if (parts.empty()) return false;
  return des::language_upto(k, bound) == des::language_upto(des::compose_all(parts), bound);
}

SafetyReport verify_safety(const ConjunctionController& c, const des::Automaton& plant,
                           const des::Automaton& global_spec, std::size_t bound) {
  const auto& ev = *plant.events();
  for (const auto& s : closed_loop_language(c, plant, bound)) {
    if (!des::run(global_spec, s))
      return {false, "closed loop leaves the specification at '" + des::format_string(ev, s) + "'"};
    if (!supervisory::satisfies_admissibility(conjunction(c, s), plant, *des::run(plant, s)))
      return {false, "inadmissible conjunction pattern at '" + des::format_string(ev, s) + "'"};
  }
  for (const auto& m : c.members) {
    ConjunctionController solo{{m}};
    const auto& r = m.realization();
    for (des::StateId q = 0; q < r.realization.state_count(); ++q)
      if (!supervisory::is_admissible(supervisory::control_policy(r, q), *r.plant,
                                      r.plant_state(q)))
        return {false, "node " + std::to_string(m.node()) + " pattern inadmissible at '" +
                           r.realization.state_label(q) + "'"};
    if (closed_loop_language(solo, *r.plant, bound) != des::language_upto(r.realization, bound))
      return {false, "node " + std::to_string(m.node()) +
                         " closed loop differs from its realization language"};
  }
  return {};
}

}  // namespace desgrid::modular
