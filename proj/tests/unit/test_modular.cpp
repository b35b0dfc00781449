#include <doctest.h>

#include <filesystem>
#include <random>

#include "desgrid/des/components.hpp"
#include "desgrid/des/operations.hpp"
#include "desgrid/error.hpp"
#include "desgrid/grid/case.hpp"
#include "desgrid/modular/bundle.hpp"
#include "desgrid/modular/conjunction.hpp"
#include "desgrid/modular/grid_model.hpp"
#include "desgrid/modular/subsystem.hpp"
#include "desgrid/modular/supervisor.hpp"
#include "desgrid/modular/symmetric.hpp"
#include "desgrid/supervisory/synthesis.hpp"
#include "support/oracles.hpp"

using namespace desgrid;
using namespace desgrid::des;
using namespace desgrid::modular;
using supervisory::SpecificationAutomaton;
using supervisory::SupervisorRealization;

namespace {

std::set<std::string> names(const GridDesModel& m, const std::vector<std::size_t>& idx) {
  std::set<std::string> out;
  for (auto i : idx) out.insert(m.automaton(i)->name());
  return out;
}

ModularSupervisor member_from(int node, const Automaton& plant, const std::vector<bool>& legal) {
  auto p = std::make_shared<const Automaton>(plant);
  auto spec = SpecificationAutomaton::from_legal_states(p, legal);
  return synthesize_modular(node, p, spec);
}

}  // namespace

TEST_CASE("two-node sub-system") {
  auto c = oracle::two_node_grid();
  GridDesModel model(c);
  CHECK(model.size() == 5);
  auto [sub, plant] = build_subsystem(model, c, 1);
  CHECK(names(model, sub.components()) == std::set<std::string>{"G01", "L01", "D01", "L02", "L03"});
  CHECK(plant.state_count() == 32);
  CHECK(sub.state_bound() == 32);
  CHECK(sub.alphabet.size() == 15);
  CHECK(sub.buses.front() == 1);
  CHECK(sub.lines(model).size() == 3);
  // Node 2 sees the same parts, with L01 once.
  auto sub2 = subsystem_spec(model, c, 2);
  auto comps = sub2.components();
  CHECK(comps.size() == 5);
  CHECK(std::set<std::size_t>(comps.begin(), comps.end()).size() == 5);
  CHECK(sub2.alphabet == sub.alphabet);
  CHECK_THROWS_AS(subsystem_spec(model, c, 99), Error);
}

TEST_CASE("isolated loaded bus gives a two-state plant") {
  grid::GridCase c;
  c.buses = {{1, 10.0}};
  c.finalize();
  GridDesModel model(c);
  auto [sub, plant] = build_subsystem(model, c, 1);
  CHECK(plant.state_count() == 2);
  CHECK(sub.neighbor_components.empty());
}

TEST_CASE("specification removes the all-tripped state") {
  auto c = oracle::two_node_grid();
  GridDesModel model(c);
  auto plant = std::make_shared<const Automaton>(build_subsystem(model, c, 1).second);
  auto spec = build_specification(plant);
  CHECK(spec.spec().state_count() == 31);
  bool found = false;
  for (StateId q = 0; q < plant->state_count(); ++q)
    if (all_tripped(plant->state_label(q))) {
      CHECK_FALSE(found);
      found = true;
    }
  CHECK(found);
  CHECK(all_tripped("G01T|L01T"));
  CHECK_FALSE(all_tripped("G01T|L01N"));
  auto full = build_specification(plant, [](std::string_view) { return false; });
  CHECK(full.spec().state_count() == 32);
  CHECK_THROWS_AS(build_specification(plant, [](std::string_view) { return true; }), Error);
}

TEST_CASE("two-node synthesis removes the line-only states") {
  auto c = oracle::two_node_grid();
  GridDesModel model(c);
  auto plant = std::make_shared<const Automaton>(build_subsystem(model, c, 1).second);
  auto spec = build_specification(plant);
  auto m = synthesize_modular(1, plant, spec);
  const auto& sup = m.realization();
  // By hand: once G01 and D01 are both tripped only line events remain, none
  // forcible, and k trips lead towards the all-tripped state. Those are the
  // 2^3 - 1 states with some line still in service.
  std::vector<bool> keep(plant->state_count(), false);
  std::size_t expected = 0;
  for (StateId q = 0; q < plant->state_count(); ++q) {
    std::string label = plant->state_label(q);
    bool g_t = label.find("G01T") != std::string::npos;
    bool d_t = label.find("D01T") != std::string::npos;
    keep[q] = !(g_t && d_t);
    expected += keep[q];
  }
  CHECK(expected == 24);
  CHECK(sup.realization.state_count() == expected);
  std::vector<bool> got(plant->state_count(), false);
  for (StateId q = 0; q < sup.realization.state_count(); ++q) got[sup.plant_state(q)] = true;
  CHECK(got == keep);
  oracle::Table tab(*plant);
  CHECK(oracle::f_controllable_subset(tab, *model.events(), keep));
  CHECK_FALSE(oracle::f_controllable_subset(tab, *model.events(), spec.legal_states()));
}

TEST_CASE("spec equal to plant needs no supervision") {
  auto c = oracle::two_node_grid();
  GridDesModel model(c);
  auto plant = std::make_shared<const Automaton>(build_subsystem(model, c, 1).second);
  auto m = synthesize_modular(1, plant, build_specification(plant, [](std::string_view) { return false; }));
  CHECK(m.realization().realization.state_count() == 32);
  CHECK(m.realization().removed.empty());
}

TEST_CASE("runtime state tracks the projection") {
  auto c = oracle::two_node_grid();
  GridDesModel model(c);
  auto plant = std::make_shared<const Automaton>(build_subsystem(model, c, 1).second);
  auto m = synthesize_modular(1, plant, build_specification(plant));
  const auto& t = *model.events();
  EventString s;
  for (const char* e : {"k1", "f1", "k2", "a1"}) {
    m.observe(t.at(e));
    s.push_back(t.at(e));
    REQUIRE(m.tracking());
    CHECK(m.current() == run(m.realization().realization, project(s, m.alphabet())));
  }
  m.reset();
  CHECK(m.current() == m.realization().realization.initial());
}

TEST_CASE("single-member conjunction is the member's pattern") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    auto r = oracle::random_plant(rng, 5, 4);
    auto spec = SpecificationAutomaton::from_legal_states(r.plant, r.legal);
    auto m = synthesize_modular(1, r.plant, spec);
    if (m.realization().empty()) continue;
    ConjunctionController cc{{m}};
    for (const auto& s : oracle::language(m.realization().realization, 4))
      CHECK(conjunction(cc, s) == m.pattern_at(s));
    CHECK(closed_loop_language(cc, *r.plant, 5) == oracle::language(m.realization().realization, 5));
  }
}

TEST_CASE("conjunction intersects on shared events only") {
  auto t = std::make_shared<EventTable>();
  auto x = t->add("x", true, false), y = t->add("y", true, false), z = t->add("z", true, false);
  auto make = [&](const char* name, std::vector<EventId> sigma) {
    AutomatonBuilder b(name, t);
    for (auto e : sigma) b.add_event(e);
    auto q0 = b.add_state("q0");
    b.set_initial(q0);
    auto q1 = b.add_state("q1");
    for (auto e : sigma) b.add_transition(q0, e, q1);
    auto plant = std::make_shared<const Automaton>(b.build());
    std::vector<bool> legal(plant->state_count(), true);
    return synthesize_modular(1, plant, SpecificationAutomaton::from_legal_states(plant, legal));
  };
  auto m1 = make("A", {x, y});
  auto m2 = make("B", {y, z});
  ConjunctionController cc{{m1, m2}};
  auto p = conjunction(cc, {});
  CHECK(p.enabled == make_event_set({x, y, z}));

  // Member B now vetoes y; A has no say on z.
  AutomatonBuilder b("B2", t);
  b.add_event(y);
  b.add_event(z);
  auto q0 = b.add_state("q0");
  b.set_initial(q0);
  b.add_transition(q0, y, b.add_state("bad"));
  b.add_transition(q0, z, b.add_state("ok"));
  auto plant = std::make_shared<const Automaton>(b.build());
  std::vector<bool> legal(plant->state_count(), true);
  for (StateId q = 0; q < plant->state_count(); ++q) legal[q] = plant->state_label(q) != "bad";
  auto veto = synthesize_modular(2, plant, SpecificationAutomaton::from_legal_states(plant, legal));
  ConjunctionController cc2{{m1, veto}};
  auto p2 = conjunction(cc2, {});
  CHECK(p2.enabled == make_event_set({x, z}));
  CHECK(cc2.alphabet() == make_event_set({x, y, z}));
}

TEST_CASE("closed loop equals the product of member languages") {
  std::mt19937_64 rng(8);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto table = std::make_shared<EventTable>();
    int ne = 3 + static_cast<int>(rng() % 2);
    for (int e = 0; e < ne; ++e) {
      bool c = rng() % 2;
      table->add("e" + std::to_string(e), c, c && rng() % 2);
    }
    int members = 2 + static_cast<int>(rng() % 2);
    std::vector<Automaton> plants;
    std::vector<ModularSupervisor> sups;
    for (int j = 0; j < members; ++j) {
      std::vector<EventId> sigma;
      for (EventId e = 0; e < static_cast<EventId>(ne); ++e)
        if (rng() % 2) sigma.push_back(e);
      if (sigma.empty()) sigma.push_back(static_cast<EventId>(rng() % ne));
      auto a = oracle::random_member(rng, table, sigma, 3, "m" + std::to_string(j) + "_");
      std::vector<bool> legal(a.state_count(), true);
      for (std::size_t q = 1; q < legal.size(); ++q) legal[q] = rng() % 4 != 0;
      plants.push_back(a);
      sups.push_back(member_from(j, a, legal));
    }
    bool any_empty = false;
    for (auto& m : sups) any_empty |= m.realization().empty();
    if (any_empty) continue;
    auto global = compose_all(plants);
    ConjunctionController cc{sups};
    std::vector<const Automaton*> reals;
    for (auto& m : sups) reals.push_back(&m.realization().realization);
    auto expected = oracle::product_language(reals, 6);
    CHECK(closed_loop_language(cc, global, 6) == expected);
    auto k = compose_all([&] {
      std::vector<Automaton> r;
      for (auto& m : sups) r.push_back(m.realization().realization);
      return r;
    }());
    CHECK(verify_safety(cc, global, k, 5).ok);
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("forcing vetoed by another member breaks consistency") {
  auto t = std::make_shared<EventTable>();
  auto u = t->add("u", false, false), f = t->add("f", true, true), c = t->add("c", true, false);
  AutomatonBuilder a("A", t);
  a.add_event(u);
  a.add_event(f);
  a.set_initial(a.add_state("a0"));
  a.add_transition(0, u, a.add_state("bad"));
  a.add_transition(0, f, a.add_state("a2"));
  auto pa = a.build();
  std::vector<bool> la(pa.state_count());
  for (StateId q = 0; q < pa.state_count(); ++q) la[q] = pa.state_label(q) != "bad";
  AutomatonBuilder b("B", t);
  b.add_event(f);
  b.add_event(c);
  b.set_initial(b.add_state("b0"));
  b.add_transition(0, f, b.add_state("bad"));
  b.add_transition(0, c, 0);
  auto pb = b.build();
  std::vector<bool> lb(pb.state_count());
  for (StateId q = 0; q < pb.state_count(); ++q) lb[q] = pb.state_label(q) != "bad";
  auto ma = member_from(1, pa, la), mb = member_from(2, pb, lb);
  CHECK(ma.pattern_at({}).forced == EventSet{f});
  ConjunctionController cc{{ma, mb}};
  auto global = compose_all({pa, pb});
  auto r = check_forced_consistency(cc, global, 3);
  CHECK_FALSE(r.ok);
  REQUIRE_FALSE(r.violations.empty());
  CHECK(r.violations.front().prefix.empty());
  CHECK(r.violations.front().event == f);
  CHECK(r.violations.front().member == 0);
  // Alone, member A is consistent.
  CHECK(check_forced_consistency(ConjunctionController{{ma}}, pa, 3).ok);
  CHECK(check_forced_consistency(ConjunctionController{{mb}}, pb, 0).ok);
}

TEST_CASE("conditional decomposability") {
  auto t = std::make_shared<EventTable>();
  auto a = t->add("a", true, false), b = t->add("b", true, false);
  auto line = [&](const char* name, EventId e) {
    AutomatonBuilder x(name, t);
    x.add_event(e);
    x.set_initial(x.add_state("0"));
    x.add_transition(0, e, x.add_state("1"));
    return x.build();
  };
  auto k1 = line("K1", a), k2 = line("K2", b);
  auto k = parallel_compose(k1, k2);
  CHECK(check_conditional_decomposability({k1, k2}, {EventSet{a}, EventSet{b}}, 4));
  CHECK(check_conditional_decomposability({k}, {make_event_set({a, b})}, 4));
  // a must precede b: projections forget the order.
  AutomatonBuilder seq("Seq", t);
  seq.add_event(a);
  seq.add_event(b);
  seq.set_initial(seq.add_state("0"));
  auto s1 = seq.add_state("1");
  seq.add_transition(0, a, s1);
  seq.add_transition(s1, b, seq.add_state("2"));
  CHECK_FALSE(check_conditional_decomposability({seq.build()}, {EventSet{a}, EventSet{b}}, 4));
}

TEST_CASE("weakened member fails the safety check") {
  auto t = std::make_shared<EventTable>();
  auto u = t->add("u", false, false);
  t->add("c", true, false);
  AutomatonBuilder a("A", t);
  a.add_event(u);
  a.add_event(t->at("c"));
  a.set_initial(a.add_state("a0"));
  auto a1 = a.add_state("a1");
  a.add_transition(0, t->at("c"), a1);
  a.add_transition(a1, u, a.add_state("bad"));
  auto plant = std::make_shared<const Automaton>(a.build());
  std::vector<bool> legal(plant->state_count());
  for (StateId q = 0; q < plant->state_count(); ++q) legal[q] = plant->state_label(q) != "bad";
  auto spec = SpecificationAutomaton::from_legal_states(plant, legal);

  auto good = synthesize_modular(1, plant, spec);
  CHECK(verify_safety(ConjunctionController{{good}}, *plant, spec.spec(), 6).ok);

  // Keep the bad state a1 by skipping synthesis.
  auto weak_sup = std::make_shared<SupervisorRealization>();
  weak_sup->plant = plant;
  weak_sup->realization = spec.spec();
  weak_sup->to_plant = spec.plant_map();
  ModularSupervisor weak(1, weak_sup);
  auto r = verify_safety(ConjunctionController{{weak}}, *plant, spec.spec(), 6);
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.reason.empty());
}

TEST_CASE("two-node closed loop is safe and consistent") {
  auto c = oracle::two_node_grid();
  auto lib = SupervisorLibrary(c);
  std::vector<ModularSupervisor> members;
  for (int node : lib.nodes())
    if (!lib.synthesis(node).view) members.push_back(lib.make_supervisor(node));
  REQUIRE(members.size() >= 2);
  ConjunctionController cc{members};
  std::vector<Automaton> parts;
  for (std::size_t i = 0; i < lib.model().size(); ++i) parts.push_back(*lib.model().automaton(i));
  auto global = compose_all(parts);
  auto spec = build_specification(std::make_shared<const Automaton>(global));
  CHECK(verify_safety(cc, global, spec.spec(), 6).ok);
  CHECK(check_forced_consistency(cc, global, 6).ok);
  CHECK(lib.listeners(lib.model().event(0, EventRole::Trip)).size() >= 1);
}

TEST_CASE("symmetric abstraction matches explicit synthesis") {
  std::mt19937_64 rng(31);
  auto c = oracle::two_node_grid();
  GridDesModel model(c);
  auto sub = subsystem_spec(model, c, 1);
  auto attrs = component_attributes(model, sub, *model.events());
  CHECK(attrs.size() == 5);
  auto sym = symmetric_synthesis(attrs, true);
  CHECK(sym.plant_states == 32);
  CHECK(sym.spec_states == 31);
  CHECK(sym.kept_states == 24);

  const char* kinds = "GLD";
  for (int trial = 0; trial < 40; ++trial) {
    auto t = std::make_shared<EventTable>();
    std::vector<Automaton> parts;
    std::vector<RoleAttributes> ra;
    int n = 1 + static_cast<int>(rng() % 4);
    int counter[3] = {0, 0, 0};
    for (int i = 0; i < n; ++i) {
      int k = static_cast<int>(rng() % 3);
      ComponentType type = kinds[k] == 'G' ? ComponentType::Generator
                           : kinds[k] == 'L' ? ComponentType::Line
                                             : ComponentType::Load;
      parts.push_back(build_component(t, {type, ++counter[k]}));
    }
    for (const auto& p : parts) {
      RoleAttributes r;
      for (const auto& tr : p.transitions(0)) {
        int role = tr.target == 0 ? 1 : 0;
        r.controllable[role] = t->controllable(tr.event);
        r.forcible[role] = t->forcible(tr.event);
      }
      ra.push_back(r);
    }
    auto plant = std::make_shared<const Automaton>(compose_all(parts));
    if (plant->state_count() < 2) continue;
    auto spec = build_specification(plant);
    for (bool forcible : {true, false}) {
      auto explicit_sup = forcible ? supervisory::supremal_f_controllable(spec)
                                   : supervisory::supremal_controllable(spec);
      auto s = symmetric_synthesis(ra, forcible);
      CHECK(s.plant_states == plant->state_count());
      CHECK(s.kept_states == explicit_sup.realization.state_count());
    }
  }
}

TEST_CASE("bundle writes a manifest and per-node files") {
  auto c = oracle::two_node_grid();
  SupervisorLibrary lib(c);
  auto dir = std::filesystem::temp_directory_path() / "desgrid_bundle_test";
  std::filesystem::remove_all(dir);
  write_bundle(lib, dir, {1, 2});
  CHECK(std::filesystem::exists(dir / "manifest.json"));
  CHECK(std::filesystem::exists(dir / "node_1.aut"));
  CHECK(std::filesystem::exists(dir / "node_2.aut"));
  std::filesystem::remove_all(dir);
}
