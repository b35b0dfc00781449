#include "desgrid/supervisory/synthesis.hpp"

#include <algorithm>

#include "desgrid/error.hpp"

namespace desgrid::supervisory {

namespace {

struct BadCheck {
  const SpecificationAutomaton& spec;
  bool use_forcible;

  // Returns the witnessing uncontrollable exit of a bad state. The witness
  // with the smallest label is reported.
  std::optional<EventId> operator()(StateId q, const std::vector<bool>& alive) const {
    const Automaton& h = spec.spec();
    const Automaton& p = spec.plant();
    const auto& ev = *p.events();
    std::optional<EventId> exit;
    for (const auto& t : p.transitions(spec.plant_state(q))) {
      if (ev.controllable(t.event)) continue;
      auto n = h.next(q, t.event);
      if (n && alive[*n]) continue;
      if (!exit || ev.label(t.event) < ev.label(*exit)) exit = t.event;
    }
    if (!exit) return std::nullopt;
    if (use_forcible)
      for (const auto& t : h.transitions(q))
        if (ev.forcible(t.event) && alive[t.target]) return std::nullopt;
    return exit;
  }
};

SupervisorRealization synthesize(const SpecificationAutomaton& spec, bool use_forcible) {
  const Automaton& h = spec.spec();
  const std::size_t n = h.state_count();
  BadCheck bad{spec, use_forcible};

  std::vector<std::uint32_t> pred_offset(n + 1, 0);
  std::vector<StateId> preds;
  for (StateId q = 0; q < n; ++q)
    for (const auto& t : h.transitions(q)) ++pred_offset[t.target + 1];
  for (std::size_t i = 0; i < n; ++i) pred_offset[i + 1] += pred_offset[i];
  preds.resize(pred_offset[n]);
  {
    auto fill = pred_offset;
    for (StateId q = 0; q < n; ++q)
      for (const auto& t : h.transitions(q)) preds[fill[t.target]++] = q;
  }

  SupervisorRealization r;
  r.plant = spec.plant_ptr();
  std::vector<bool> alive(n, true);
  std::vector<StateId> candidates(n);
  for (StateId q = 0; q < n; ++q) candidates[q] = q;
  std::vector<bool> marked(n, false);

  while (!candidates.empty()) {
    std::vector<std::pair<StateId, EventId>> found;
    for (StateId q : candidates)
      if (alive[q])
        if (auto w = bad(q, alive)) found.emplace_back(q, *w);
    if (found.empty()) break;
    ++r.iterations;
    std::vector<StateId> dropped;
    for (auto [q, w] : found) {
      alive[q] = false;
      dropped.push_back(q);
      r.removed.push_back({h.state_label(q), w, r.iterations});
    }
    // Trim what is no longer reachable.
    std::vector<bool> reach(n, false);
    if (alive[h.initial()]) {
      std::vector<StateId> queue{h.initial()};
      reach[h.initial()] = true;
      for (std::size_t i = 0; i < queue.size(); ++i)
        for (const auto& t : h.transitions(queue[i]))
          if (alive[t.target] && !reach[t.target]) {
            reach[t.target] = true;
            queue.push_back(t.target);
          }
    }
    for (StateId q = 0; q < n; ++q)
      if (alive[q] && !reach[q]) {
        alive[q] = false;
        dropped.push_back(q);
        r.removed.push_back({h.state_label(q), std::nullopt, r.iterations});
      }
    candidates.clear();
    std::fill(marked.begin(), marked.end(), false);
    for (StateId q : dropped)
      for (auto i = pred_offset[q]; i < pred_offset[q + 1]; ++i) {
        StateId pq = preds[i];
        if (alive[pq] && !marked[pq]) {
          marked[pq] = true;
          candidates.push_back(pq);
        }
      }
    std::sort(candidates.begin(), candidates.end());
  }

  auto [real, map] = restrict_states(h, alive);
  r.realization = real.renamed("sup(" + spec.plant().name() + ")");
  r.to_plant.reserve(map.size());
  for (StateId q : map) r.to_plant.push_back(spec.plant_state(q));
  return r;
}

}  // namespace

SpecificationAutomaton SupervisorRealization::as_specification() const {
  return SpecificationAutomaton::from_automaton(plant, realization);
}

FControllability check_f_controllable(const SpecificationAutomaton& spec) {
  const Automaton& h = spec.spec();
  std::vector<bool> alive(h.state_count(), true);
  BadCheck bad{spec, true};
  // Breadth-first so the counterexample prefix is a shortest one.
  std::vector<StateId> queue{h.initial()};
  std::vector<std::pair<StateId, EventId>> parent(h.state_count(), {des::kNoState, 0});
  std::vector<bool> seen(h.state_count(), false);
  seen[h.initial()] = true;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    StateId q = queue[i];
    if (auto w = bad(q, alive)) {
      FControllability r{false, Counterexample{{}, *w}};
      for (StateId x = q; parent[x].first != des::kNoState; x = parent[x].first)
        r.counterexample->prefix.push_back(parent[x].second);
      std::reverse(r.counterexample->prefix.begin(), r.counterexample->prefix.end());
      return r;
    }
    for (const auto& t : h.transitions(q))
      if (!seen[t.target]) {
        seen[t.target] = true;
        parent[t.target] = {q, t.event};
        queue.push_back(t.target);
      }
  }
  return {};
}

std::vector<StateId> find_bad_states(const SpecificationAutomaton& spec) {
  const Automaton& h = spec.spec();
  std::vector<bool> alive(h.state_count(), true);
  BadCheck bad{spec, true};
  std::vector<StateId> out;
  for (StateId q = 0; q < h.state_count(); ++q)
    if (bad(q, alive)) out.push_back(q);
  return out;
}

SupervisorRealization supremal_f_controllable(const SpecificationAutomaton& spec) {
  return synthesize(spec, true);
}

SupervisorRealization supremal_controllable(const SpecificationAutomaton& spec) {
  return synthesize(spec, false);
}

}  // namespace desgrid::supervisory
