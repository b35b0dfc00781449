#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "desgrid/modular/subsystem.hpp"
#include "desgrid/supervisory/lookahead.hpp"
#include "desgrid/supervisory/policy.hpp"

namespace desgrid::modular {

using supervisory::ControlPattern;

// Per-node supervisor with runtime state. The offline backend tracks a state
// of a synthesized realization; the online backend tracks a product state and
// evaluates a depth-limited lookahead on each query.
class ModularSupervisor {
 public:
  ModularSupervisor(int node, std::shared_ptr<const supervisory::SupervisorRealization> sup,
                    std::shared_ptr<const supervisory::SpecificationAutomaton> spec = nullptr);
  ModularSupervisor(int node, std::shared_ptr<const supervisory::ProductView> view,
                    std::size_t depth);

  int node() const { return node_; }
  const des::EventSet& alphabet() const { return alphabet_; }
  bool online() const { return view_ != nullptr; }

  const supervisory::SupervisorRealization& realization() const;
  const supervisory::SpecificationAutomaton* specification() const { return spec_.get(); }
  const std::shared_ptr<const supervisory::ProductView>& view() const { return view_; }

  // Events outside the alphabet are ignored.
  void observe(des::EventId e);
  void reset();
  bool tracking() const { return tracking_; }
  std::optional<des::StateId> current() const;
  const des::EventString& observed() const { return observed_; }

  // Pattern at the current state; empty when the supervisor lost track or
  // the lookahead prunes the current state.
  std::optional<ControlPattern> pattern(const des::EventSet& threatened = {}) const;

  // Offline backend only: pattern after a local string; throws when the
  // string leaves the realization.
  ControlPattern pattern_at(const des::EventString& local) const;
  // Events active in the member plant after a local string.
  des::EventSet plant_active_at(const des::EventString& local) const;

 private:
  int node_;
  des::EventSet alphabet_;
  std::shared_ptr<const supervisory::SupervisorRealization> sup_;
  std::shared_ptr<const supervisory::SpecificationAutomaton> spec_;
  std::shared_ptr<const supervisory::ProductView> view_;
  std::size_t depth_ = 0;

  bool tracking_ = true;
  des::StateId state_ = 0;
  supervisory::ProductView::State product_;
  des::EventString observed_;
};

ModularSupervisor synthesize_modular(int node, std::shared_ptr<const des::Automaton> plant_j,
                                     const supervisory::SpecificationAutomaton& spec_j);

struct SupervisorOptions {
  int hops = 1;
  std::uint64_t state_bound = std::uint64_t{1} << 18;
  std::size_t lookahead_depth = 2;
};

struct NodeSynthesis {
  SubsystemSpec subsystem;
  std::shared_ptr<const des::Automaton> plant;  // offline backend
  std::shared_ptr<const supervisory::SpecificationAutomaton> spec;
  std::shared_ptr<const supervisory::SupervisorRealization> sup;
  std::shared_ptr<const supervisory::ProductView> view;  // online backend
};

// Per-case supervisor synthesis, built lazily per node and shared between
// concurrent simulations.
class SupervisorLibrary {
 public:
  SupervisorLibrary(const grid::GridCase& base, SupervisorOptions options = {});

  const GridDesModel& model() const { return model_; }
  const SupervisorOptions& options() const { return options_; }
  const std::vector<int>& nodes() const { return nodes_; }
  const SubsystemSpec& subsystem(int node) const;
  // Nodes whose alphabet contains the event, ascending.
  const std::vector<int>& listeners(des::EventId e) const;

  const NodeSynthesis& synthesis(int node) const;
  ModularSupervisor make_supervisor(int node) const;

 private:
  std::size_t slot(int node) const;

  GridDesModel model_;
  SupervisorOptions options_;
  std::vector<int> nodes_;
  std::vector<SubsystemSpec> subsystems_;
  std::vector<std::vector<int>> listeners_;
  mutable std::vector<std::unique_ptr<NodeSynthesis>> built_;
  mutable std::unique_ptr<std::once_flag[]> once_;
};

}  // namespace desgrid::modular
