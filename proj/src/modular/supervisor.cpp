#include "desgrid/modular/supervisor.hpp"

#include <algorithm>

#include "desgrid/des/operations.hpp"
#include "desgrid/error.hpp"
#include "desgrid/supervisory/synthesis.hpp"

namespace desgrid::modular {

ModularSupervisor::ModularSupervisor(
    int node, std::shared_ptr<const supervisory::SupervisorRealization> sup,
    std::shared_ptr<const supervisory::SpecificationAutomaton> spec)
    : node_(node), sup_(std::move(sup)), spec_(std::move(spec)) {
  if (!sup_) throw Error("supervisor requires a realization");
  alphabet_ = sup_->plant->alphabet();
  reset();
}

ModularSupervisor::ModularSupervisor(int node,
                                     std::shared_ptr<const supervisory::ProductView> view,
                                     std::size_t depth)
    : node_(node), view_(std::move(view)), depth_(depth) {
  if (!view_) throw Error("supervisor requires a plant view");
  if (depth_ == 0) throw Error("lookahead depth must be at least 1");
  alphabet_ = view_->alphabet();
  reset();
}

const supervisory::SupervisorRealization& ModularSupervisor::realization() const {
  if (!sup_) throw Error("node " + std::to_string(node_) + " has no explicit realization");
  return *sup_;
}

void ModularSupervisor::reset() {
  observed_.clear();
  if (view_) {
    product_ = view_->initial();
    tracking_ = true;
  } else {
    tracking_ = !sup_->empty();
    state_ = tracking_ ? sup_->realization.initial() : 0;
  }
}

void ModularSupervisor::observe(des::EventId e) {
  if (!des::contains(alphabet_, e)) return;
  observed_.push_back(e);
  if (!tracking_) return;
  if (view_) {
    auto n = view_->step(product_, e);
    if (n) {
      product_ = std::move(*n);
    } else {
      tracking_ = false;
    }
  } else {
    auto n = sup_->realization.next(state_, e);
    if (n) {
      state_ = *n;
    } else {
      tracking_ = false;
    }
  }
}

std::optional<des::StateId> ModularSupervisor::current() const {
  if (view_ || !tracking_) return std::nullopt;
  return state_;
}

std::optional<ControlPattern> ModularSupervisor::pattern(const des::EventSet& threatened) const {
  if (!tracking_) return std::nullopt;
  if (view_) return supervisory::lookahead_policy(*view_, product_, depth_, threatened);
  return supervisory::control_policy(*sup_, state_, threatened);
}

ControlPattern ModularSupervisor::pattern_at(const des::EventString& local) const {
  const auto& r = realization();
  auto q = des::run(r.realization, local);
  if (!q)
    throw Error("node " + std::to_string(node_) + " cannot track '" +
                des::format_string(*r.plant->events(), local) + "'");
  return supervisory::control_policy(r, *q);
}

des::EventSet ModularSupervisor::plant_active_at(const des::EventString& local) const {
  if (view_) {
    auto s = view_->initial();
    for (auto e : local) {
      auto n = view_->step(s, e);
      if (!n) throw Error("string leaves the member plant");
      s = std::move(*n);
    }
    std::vector<std::pair<des::EventId, supervisory::ProductView::State>> succ;
    view_->successors(s, succ);
    des::EventSet out;
    for (auto& [e, t] : succ) out.push_back(e);
    return out;
  }
  auto p = des::run(*sup_->plant, local);
  if (!p) throw Error("string leaves the member plant");
  return des::active_events(*sup_->plant, *p);
}

ModularSupervisor synthesize_modular(int node, std::shared_ptr<const des::Automaton> plant_j,
                                     const supervisory::SpecificationAutomaton& spec_j) {
  if (&spec_j.plant() != plant_j.get()) throw Error("specification is not over the given plant");
  auto sup = std::make_shared<const supervisory::SupervisorRealization>(
      supervisory::supremal_f_controllable(spec_j));
  return ModularSupervisor(node, sup,
                           std::make_shared<const supervisory::SpecificationAutomaton>(spec_j));
}

SupervisorLibrary::SupervisorLibrary(const grid::GridCase& base, SupervisorOptions options)
    : model_(base), options_(options) {
  std::vector<std::size_t> order(base.buses.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return base.buses[a].id < base.buses[b].id; });
  listeners_.resize(model_.events()->size());
  for (std::size_t b : order) {
    int id = base.buses[b].id;
    nodes_.push_back(id);
    subsystems_.push_back(subsystem_spec(model_, base, id, options_.hops));
    for (des::EventId e : subsystems_.back().alphabet) listeners_[e].push_back(id);
  }
  built_.resize(nodes_.size());
  once_ = std::make_unique<std::once_flag[]>(nodes_.size());
}

std::size_t SupervisorLibrary::slot(int node) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), node);
  if (it == nodes_.end() || *it != node) throw Error("unknown node " + std::to_string(node));
  return static_cast<std::size_t>(it - nodes_.begin());
}

const SubsystemSpec& SupervisorLibrary::subsystem(int node) const {
  return subsystems_[slot(node)];
}

const std::vector<int>& SupervisorLibrary::listeners(des::EventId e) const {
  static const std::vector<int> none;
  return e < listeners_.size() ? listeners_[e] : none;
}

const NodeSynthesis& SupervisorLibrary::synthesis(int node) const {
  std::size_t i = slot(node);
  std::call_once(once_[i], [&] {
    auto ns = std::make_unique<NodeSynthesis>();
    ns->subsystem = subsystems_[i];
    std::vector<std::shared_ptr<const des::Automaton>> parts;
    for (std::size_t c : ns->subsystem.components()) parts.push_back(model_.automaton(c));
    if (!parts.empty() && ns->subsystem.state_bound() > options_.state_bound) {
      ns->view = std::make_shared<const supervisory::ProductView>(
          parts, supervisory::ProductView::all_tripped);
    } else {
      std::vector<des::Automaton> comps;
      for (const auto& p : parts) comps.push_back(*p);
      if (comps.empty()) throw Error("node " + std::to_string(node) + " has no components");
      des::Automaton plant = des::compose_all(comps);
      ns->plant = std::make_shared<const des::Automaton>(plant.renamed("P" + std::to_string(node)));
      ns->spec = std::make_shared<const supervisory::SpecificationAutomaton>(
          build_specification(ns->plant));
      ns->sup = std::make_shared<const supervisory::SupervisorRealization>(
          supervisory::supremal_f_controllable(*ns->spec));
    }
    built_[i] = std::move(ns);
  });
  return *built_[i];
}

ModularSupervisor SupervisorLibrary::make_supervisor(int node) const {
  const NodeSynthesis& ns = synthesis(node);
  if (ns.view) return ModularSupervisor(node, ns.view, options_.lookahead_depth);
  return ModularSupervisor(node, ns.sup, ns.spec);
}

}  // namespace desgrid::modular
