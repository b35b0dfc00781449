#pragma once

#include <concepts>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "desgrid/error.hpp"
#include "desgrid/supervisory/policy.hpp"

namespace desgrid::supervisory {

template <class V>
concept PlantView = requires(const V& v, const typename V::State& s,
                             std::vector<std::pair<EventId, typename V::State>>& out) {
  typename V::Hash;
  { v.successors(s, out) };
  { v.illegal(s) } -> std::same_as<bool>;
  { v.events() } -> std::same_as<const des::EventTable&>;
};

// A plant automaton with a state-based legality mask.
class ExplicitView {
 public:
  using State = StateId;
  using Hash = std::hash<StateId>;

  ExplicitView(const Automaton& plant, std::vector<bool> legal)
      : plant_(&plant), legal_(std::move(legal)) {}

  void successors(State q, std::vector<std::pair<EventId, State>>& out) const {
    out.clear();
    for (const auto& t : plant_->transitions(q)) out.emplace_back(t.event, t.target);
  }
  bool illegal(State q) const { return !legal_.at(q); }
  const des::EventTable& events() const { return *plant_->events(); }

 private:
  const Automaton* plant_;
  std::vector<bool> legal_;
};

// Synchronous product of components explored on demand.
class ProductView {
 public:
  using State = std::vector<StateId>;
  struct Hash {
    std::size_t operator()(const State& s) const {
      std::size_t h = 1469598103934665603ull;
      for (StateId q : s) h = (h ^ q) * 1099511628211ull;
      return h;
    }
  };
  using Predicate = std::function<bool(const ProductView&, const State&)>;

  ProductView(std::vector<std::shared_ptr<const Automaton>> components, Predicate illegal);

  State initial() const;
  void successors(const State& s, std::vector<std::pair<EventId, State>>& out) const;
  bool illegal(const State& s) const { return illegal_(*this, s); }
  const des::EventTable& events() const { return *components_.front()->events(); }

  const std::vector<std::shared_ptr<const Automaton>>& components() const { return components_; }
  const EventSet& alphabet() const { return alphabet_; }
  std::optional<State> step(const State& s, EventId e) const;
  std::string label(const State& s) const;

  // Every component in its second state (the tripped state for grid parts).
  static bool all_tripped(const ProductView& v, const State& s);

 private:
  std::vector<std::shared_ptr<const Automaton>> components_;
  Predicate illegal_;
  EventSet alphabet_;
  std::unordered_map<EventId, std::vector<std::size_t>> owners_;
};

template <class State>
struct LookaheadNode {
  State state;
  std::size_t depth = 0;
  std::optional<std::size_t> parent;
  EventId via = 0;
  bool pending = false;
  bool removed = false;
};

template <class State>
struct LookaheadTree {
  std::size_t depth_limit = 0;
  std::vector<LookaheadNode<State>> nodes;  // nodes[0] is the root
  std::optional<ControlPattern> pattern;     // empty when the root is pruned
};

namespace detail {

// States within distance < M of the root are expanded; states first reached
// at distance M are pending and count as illegal. The bad-state fixpoint then
// runs on this finite graph.
template <PlantView V>
struct LookaheadGraph {
  using State = typename V::State;
  std::vector<State> states;
  std::vector<std::size_t> dist;
  std::vector<std::vector<std::pair<EventId, std::size_t>>> out;
  std::vector<bool> alive;
  std::unordered_map<State, std::size_t, typename V::Hash> index;

  void build(const V& view, const State& root, std::size_t M) {
    std::vector<std::pair<EventId, State>> succ;
    auto id_of = [&](const State& s, std::size_t d) {
      auto [it, fresh] = index.try_emplace(s, states.size());
      if (fresh) {
        states.push_back(s);
        dist.push_back(d);
        out.emplace_back();
      }
      return it->second;
    };
    id_of(root, 0);
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (dist[i] >= M || view.illegal(states[i])) continue;
      view.successors(states[i], succ);
      for (auto& [e, s] : succ) {
        std::size_t j = id_of(s, dist[i] + 1);
        out[i].emplace_back(e, j);
      }
    }
    alive.assign(states.size(), false);
    for (std::size_t i = 0; i < states.size(); ++i)
      alive[i] = dist[i] < M && !view.illegal(states[i]);

    const auto& ev = view.events();
    std::vector<std::vector<std::size_t>> preds(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
      for (auto [e, j] : out[i]) preds[j].push_back(i);
    auto bad = [&](std::size_t i) {
      bool exit = false, escape = false;
      for (auto [e, j] : out[i]) {
        if (!ev.controllable(e) && !alive[j]) exit = true;
        if (ev.forcible(e) && alive[j]) escape = true;
      }
      return exit && !escape;
    };
    std::vector<std::size_t> work;
    for (std::size_t i = 0; i < states.size(); ++i)
      if (alive[i]) work.push_back(i);
    while (!work.empty()) {
      std::size_t i = work.back();
      work.pop_back();
      if (!alive[i] || !bad(i)) continue;
      alive[i] = false;
      for (std::size_t p : preds[i])
        if (alive[p]) work.push_back(p);
    }
  }

  std::optional<ControlPattern> pattern(const V& view, const EventSet& threatened) const {
    if (!alive[0]) return std::nullopt;
    const auto& ev = view.events();
    ControlPattern p;
    bool needed = false;
    for (auto [e, j] : out[0]) {
      if (alive[j]) p.enabled.push_back(e);
      if (!ev.controllable(e) && (!alive[j] || des::contains(threatened, e))) needed = true;
    }
    p.enabled = des::make_event_set(std::move(p.enabled));
    if (needed)
      for (EventId e : p.enabled)
        if (ev.forcible(e)) p.forced.push_back(e);
    return p;
  }
};

}  // namespace detail

// Online pattern from a depth-M lookahead with pending states treated as
// illegal. Empty when the current state itself is pruned.
template <PlantView V>
std::optional<ControlPattern> lookahead_policy(const V& view, const typename V::State& q,
                                               std::size_t M, const EventSet& threatened = {}) {
  if (M == 0) throw Error("lookahead depth must be at least 1");
  detail::LookaheadGraph<V> g;
  g.build(view, q, M);
  return g.pattern(view, threatened);
}

// Explicit unrolling of the plant to depth M, with pruning marks and the
// resulting pattern at the root.
template <PlantView V>
LookaheadTree<typename V::State> build_lookahead_tree(const V& view,
                                                      const typename V::State& q,
                                                      std::size_t M) {
  if (M == 0) throw Error("lookahead depth must be at least 1");
  detail::LookaheadGraph<V> g;
  g.build(view, q, M);
  LookaheadTree<typename V::State> tree;
  tree.depth_limit = M;
  tree.nodes.push_back({q, 0, std::nullopt, 0, false, false});
  std::vector<std::pair<EventId, typename V::State>> succ;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    auto& node = tree.nodes[i];
    node.removed = !g.alive[g.index.at(node.state)];
    if (node.depth == M) {
      node.pending = true;
      continue;
    }
    if (view.illegal(node.state)) continue;
    view.successors(node.state, succ);
    std::size_t depth = node.depth;
    for (auto& [e, s] : succ) tree.nodes.push_back({s, depth + 1, i, e, false, false});
  }
  tree.pattern = g.pattern(view, {});
  return tree;
}

}  // namespace desgrid::supervisory
