#pragma once

#include <functional>
#include <memory>
#include <string_view>
#include <utility>
#include <vector>

#include "desgrid/des/automaton.hpp"
#include "desgrid/modular/grid_model.hpp"
#include "desgrid/supervisory/specification.hpp"

namespace desgrid::modular {

struct SubsystemSpec {
  int node = 0;                       // bus id
  std::vector<int> buses;             // node first, then the others by id
  std::vector<std::size_t> own_components;
  std::vector<std::size_t> neighbor_components;
  des::EventSet alphabet;

  std::vector<std::size_t> components() const;
  // Branch indices of the member lines.
  std::vector<std::size_t> lines(const GridDesModel& model) const;
  // Product state count, saturating at 2^63.
  std::uint64_t state_bound() const;
};

// Node plus buses within `hops` in-service lines. Per bus, in order:
// generators, the load, then incident lines not yet taken.
SubsystemSpec subsystem_spec(const GridDesModel& model, const grid::GridCase& c, int node,
                             int hops = 1);

std::pair<SubsystemSpec, des::Automaton> build_subsystem(const GridDesModel& model,
                                                         const grid::GridCase& c, int node,
                                                         int hops = 1);

using StatePredicate = std::function<bool(std::string_view label)>;

// True when every '|'-separated component label ends in T.
bool all_tripped(std::string_view label);

// Plant minus the states matching the predicate, trimmed.
supervisory::SpecificationAutomaton build_specification(
    std::shared_ptr<const des::Automaton> plant, const StatePredicate& illegal = all_tripped);

}  // namespace desgrid::modular
