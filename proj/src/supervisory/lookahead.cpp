#include "desgrid/supervisory/lookahead.hpp"

namespace desgrid::supervisory {

ProductView::ProductView(std::vector<std::shared_ptr<const Automaton>> components,
                         Predicate illegal)
    : components_(std::move(components)), illegal_(std::move(illegal)) {
  if (components_.empty()) throw Error("product view needs at least one component");
  for (std::size_t c = 0; c < components_.size(); ++c) {
    if (components_[c]->events() != components_.front()->events())
      throw Error("product components must share one event table");
    alphabet_ = des::set_union(alphabet_, components_[c]->alphabet());
    for (EventId e : components_[c]->alphabet()) owners_[e].push_back(c);
  }
}

ProductView::State ProductView::initial() const {
  State s;
  s.reserve(components_.size());
  for (const auto& c : components_) s.push_back(c->initial());
  return s;
}

std::optional<ProductView::State> ProductView::step(const State& s, EventId e) const {
  auto it = owners_.find(e);
  if (it == owners_.end()) return std::nullopt;
  State n = s;
  for (std::size_t c : it->second) {
    auto q = components_[c]->next(s[c], e);
    if (!q) return std::nullopt;
    n[c] = *q;
  }
  return n;
}

void ProductView::successors(const State& s, std::vector<std::pair<EventId, State>>& out) const {
  out.clear();
  EventSet candidates;
  for (std::size_t c = 0; c < components_.size(); ++c)
    for (const auto& t : components_[c]->transitions(s[c])) candidates.push_back(t.event);
  for (EventId e : des::make_event_set(std::move(candidates)))
    if (auto n = step(s, e)) out.emplace_back(e, std::move(*n));
}

std::string ProductView::label(const State& s) const {
  std::string out;
  for (std::size_t c = 0; c < components_.size(); ++c) {
    if (c) out += '|';
    out += components_[c]->state_label(s[c]);
  }
  return out;
}

bool ProductView::all_tripped(const ProductView&, const State& s) {
  for (StateId q : s)
    if (q != 1) return false;
  return true;
}

}  // namespace desgrid::supervisory
