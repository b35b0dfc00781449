#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "desgrid/modular/subsystem.hpp"

namespace desgrid::modular {

// Attributes of the trip, change and restore events of a two-state component.
struct RoleAttributes {
  std::array<bool, 3> controllable{};
  std::array<bool, 3> forcible{};

  auto operator<=>(const RoleAttributes&) const = default;
};

std::vector<RoleAttributes> component_attributes(const GridDesModel& model,
                                                 const SubsystemSpec& sub,
                                                 const des::EventTable& table);

// Synthesis on the counter abstraction of a product of two-state components
// with the all-tripped state illegal. Components with equal attributes are
// interchangeable, so the supremal result is a union of orbits and a quotient
// state is the number of normal components per attribute class.
struct SymmetricResult {
  std::vector<RoleAttributes> classes;
  std::vector<int> class_sizes;
  std::vector<std::vector<int>> kept;  // normal-counts per class, sorted
  std::uint64_t plant_states = 0;
  std::uint64_t spec_states = 0;
  std::uint64_t kept_states = 0;  // concrete realization size
};

SymmetricResult symmetric_synthesis(const std::vector<RoleAttributes>& components,
                                    bool use_forcible);

}  // namespace desgrid::modular
