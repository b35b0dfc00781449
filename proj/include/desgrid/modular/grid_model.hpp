#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "desgrid/des/components.hpp"
#include "desgrid/grid/case.hpp"

namespace desgrid::modular {

using des::EventId;

struct ComponentRef {
  des::ComponentKind kind;
  std::size_t element;  // bus index for loads, branch index, generator index
};

// Component automata of a grid: loads are numbered 1.. over buses with
// positive demand in bus order; lines carry their branch id; generators their
// row number. Out-of-service elements are left out.
class GridDesModel {
 public:
  explicit GridDesModel(const grid::GridCase& c);

  const std::shared_ptr<des::EventTable>& events() const { return events_; }
  std::size_t size() const { return components_.size(); }
  const ComponentRef& component(std::size_t i) const { return components_.at(i); }
  const std::shared_ptr<const des::Automaton>& automaton(std::size_t i) const {
    return automata_.at(i);
  }
  EventId event(std::size_t i, des::EventRole role) const;

  std::optional<std::size_t> load_component(std::size_t bus_index) const;
  std::optional<std::size_t> line_component(std::size_t branch_index) const;
  std::optional<std::size_t> gen_component(std::size_t gen_index) const;
  // Component owning an event.
  std::size_t owner(EventId e) const { return owner_.at(e); }

 private:
  std::shared_ptr<des::EventTable> events_;
  std::vector<ComponentRef> components_;
  std::vector<std::shared_ptr<const des::Automaton>> automata_;
  std::vector<std::optional<std::size_t>> by_bus_, by_branch_, by_gen_;
  std::vector<std::size_t> owner_;
};

}  // namespace desgrid::modular
