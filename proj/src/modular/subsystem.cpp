#include "desgrid/modular/subsystem.hpp"

#include <algorithm>
#include <set>

#include "desgrid/des/operations.hpp"
#include "desgrid/error.hpp"

namespace desgrid::modular {

std::vector<std::size_t> SubsystemSpec::components() const {
  std::vector<std::size_t> all = own_components;
  all.insert(all.end(), neighbor_components.begin(), neighbor_components.end());
  return all;
}

std::vector<std::size_t> SubsystemSpec::lines(const GridDesModel& model) const {
  std::vector<std::size_t> out;
  for (std::size_t c : components())
    if (model.component(c).kind.type == des::ComponentType::Line)
      out.push_back(model.component(c).element);
  return out;
}

std::uint64_t SubsystemSpec::state_bound() const {
  std::size_t n = own_components.size() + neighbor_components.size();
  return n >= 63 ? (std::uint64_t{1} << 63) : (std::uint64_t{1} << n);
}

SubsystemSpec subsystem_spec(const GridDesModel& model, const grid::GridCase& c, int node,
                             int hops) {
  auto root = c.find_bus(node);
  if (!root) throw Error("unknown node " + std::to_string(node));
  if (hops < 0) throw Error("hops must be non-negative");

  std::vector<std::vector<std::size_t>> adj(c.buses.size());
  for (std::size_t k = 0; k < c.branches.size(); ++k)
    if (model.line_component(k)) {
      adj[c.branches[k].from_index].push_back(c.branches[k].to_index);
      adj[c.branches[k].to_index].push_back(c.branches[k].from_index);
    }
  std::vector<int> depth(c.buses.size(), -1);
  std::vector<std::size_t> frontier{*root}, members{*root};
  depth[*root] = 0;
  for (int h = 1; h <= hops; ++h) {
    std::vector<std::size_t> next;
    for (std::size_t v : frontier)
      for (std::size_t w : adj[v])
        if (depth[w] < 0) {
          depth[w] = h;
          next.push_back(w);
          members.push_back(w);
        }
    frontier = std::move(next);
  }
  std::sort(members.begin() + 1, members.end(),
            [&](auto a, auto b) { return c.buses[a].id < c.buses[b].id; });

  SubsystemSpec s;
  s.node = node;
  std::set<std::size_t> taken;
  for (std::size_t b : members) {
    s.buses.push_back(c.buses[b].id);
    auto& list = b == *root ? s.own_components : s.neighbor_components;
    for (std::size_t g = 0; g < c.gens.size(); ++g)
      if (c.gens[g].bus_index == b)
        if (auto comp = model.gen_component(g)) list.push_back(*comp);
    if (auto comp = model.load_component(b)) list.push_back(*comp);
    for (std::size_t k = 0; k < c.branches.size(); ++k) {
      const auto& br = c.branches[k];
      if (br.from_index != b && br.to_index != b) continue;
      auto comp = model.line_component(k);
      if (comp && taken.insert(*comp).second) list.push_back(*comp);
    }
  }
  for (std::size_t comp : s.components())
    s.alphabet = des::set_union(s.alphabet, model.automaton(comp)->alphabet());
  return s;
}

std::pair<SubsystemSpec, des::Automaton> build_subsystem(const GridDesModel& model,
                                                         const grid::GridCase& c, int node,
                                                         int hops) {
  SubsystemSpec s = subsystem_spec(model, c, node, hops);
  std::vector<des::Automaton> parts;
  for (std::size_t comp : s.components()) parts.push_back(*model.automaton(comp));
  if (parts.empty()) {
    // A bare bus contributes a single idle state.
    des::AutomatonBuilder b("node" + std::to_string(node), model.events());
    b.set_initial(b.add_state("B" + std::to_string(node)));
    return {s, b.build()};
  }
  des::Automaton plant = des::compose_all(parts).renamed("P" + std::to_string(node));
  return {std::move(s), std::move(plant)};
}

bool all_tripped(std::string_view label) {
  std::size_t start = 0;
  while (true) {
    std::size_t end = label.find('|', start);
    std::string_view part = label.substr(start, end == std::string_view::npos ? end : end - start);
    if (part.empty() || part.back() != 'T') return false;
    if (end == std::string_view::npos) return true;
    start = end + 1;
  }
}

supervisory::SpecificationAutomaton build_specification(
    std::shared_ptr<const des::Automaton> plant, const StatePredicate& illegal) {
  std::vector<bool> legal(plant->state_count());
  for (des::StateId q = 0; q < legal.size(); ++q) legal[q] = !illegal(plant->state_label(q));
  return supervisory::SpecificationAutomaton::from_legal_states(std::move(plant), legal);
}

}  // namespace desgrid::modular
