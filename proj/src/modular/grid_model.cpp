#include "desgrid/modular/grid_model.hpp"

#include "desgrid/error.hpp"

namespace desgrid::modular {

GridDesModel::GridDesModel(const grid::GridCase& c)
    : events_(std::make_shared<des::EventTable>()),
      by_bus_(c.buses.size()),
      by_branch_(c.branches.size()),
      by_gen_(c.gens.size()) {
  auto add = [&](des::ComponentKind kind, std::size_t element) {
    std::size_t id = components_.size();
    components_.push_back({kind, element});
    automata_.push_back(std::make_shared<const des::Automaton>(des::build_component(events_, kind)));
    owner_.resize(events_->size(), id);
    return id;
  };
  int load_no = 0;
  for (std::size_t b = 0; b < c.buses.size(); ++b)
    if (c.buses[b].load_mw > 0) by_bus_[b] = add({des::ComponentType::Load, ++load_no}, b);
  for (std::size_t k = 0; k < c.branches.size(); ++k)
    if (c.branches[k].in_service)
      by_branch_[k] = add({des::ComponentType::Line, grid::GridCase::branch_id(k)}, k);
  for (std::size_t g = 0; g < c.gens.size(); ++g)
    if (c.gens[g].in_service)
      by_gen_[g] = add({des::ComponentType::Generator, static_cast<int>(g) + 1}, g);
}

EventId GridDesModel::event(std::size_t i, des::EventRole role) const {
  return events_->at(des::event_label(component(i).kind, role));
}

std::optional<std::size_t> GridDesModel::load_component(std::size_t bus_index) const {
  return by_bus_.at(bus_index);
}

std::optional<std::size_t> GridDesModel::line_component(std::size_t branch_index) const {
  return by_branch_.at(branch_index);
}

std::optional<std::size_t> GridDesModel::gen_component(std::size_t gen_index) const {
  return by_gen_.at(gen_index);
}

}  // namespace desgrid::modular
