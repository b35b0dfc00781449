#include "desgrid/modular/symmetric.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "desgrid/error.hpp"

namespace desgrid::modular {

std::vector<RoleAttributes> component_attributes(const GridDesModel& model,
                                                 const SubsystemSpec& sub,
                                                 const des::EventTable& table) {
  std::vector<RoleAttributes> out;
  for (std::size_t c : sub.components()) {
    RoleAttributes a;
    for (int r = 0; r < 3; ++r) {
      des::EventId e = model.event(c, static_cast<des::EventRole>(r));
      a.controllable[r] = table.controllable(e);
      a.forcible[r] = table.forcible(e);
    }
    out.push_back(a);
  }
  return out;
}

namespace {

std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

}  // namespace

SymmetricResult symmetric_synthesis(const std::vector<RoleAttributes>& components,
                                    bool use_forcible) {
  if (components.empty()) throw Error("no components");
  SymmetricResult r;
  std::map<RoleAttributes, int> sizes;
  for (const auto& a : components) ++sizes[a];
  for (const auto& [a, n] : sizes) {
    r.classes.push_back(a);
    r.class_sizes.push_back(n);
  }
  const std::size_t k = r.classes.size();
  std::vector<std::size_t> radix(k), stride(k);
  std::size_t total = 1;
  for (std::size_t c = 0; c < k; ++c) {
    radix[c] = static_cast<std::size_t>(r.class_sizes[c]) + 1;
    stride[c] = total;
    total *= radix[c];
  }
  auto count = [&](std::size_t q, std::size_t c) { return static_cast<int>(q / stride[c] % radix[c]); };
  auto weight = [&](std::size_t q) {
    std::uint64_t w = 1;
    for (std::size_t c = 0; c < k; ++c) w *= binomial(r.class_sizes[c], count(q, c));
    return w;
  };

  // Every count vector is reachable from all-normal in the plant.
  std::vector<bool> alive(total, true);
  alive[0] = false;  // all tripped
  for (std::size_t q = 0; q < total; ++q) r.plant_states += weight(q);
  r.spec_states = r.plant_states - 1;

  // Moves of class c: trip lowers its count, change loops, restore raises.
  auto bad = [&](std::size_t q) {
    bool exit = false, escape = false;
    for (std::size_t c = 0; c < k; ++c) {
      int n = count(q, c);
      const auto& a = r.classes[c];
      std::array<std::optional<std::size_t>, 3> target;
      if (n > 0) target[0] = q - stride[c];
      if (n > 0) target[1] = q;
      if (n < r.class_sizes[c]) target[2] = q + stride[c];
      for (int role = 0; role < 3; ++role) {
        if (!target[role]) continue;
        bool ok = alive[*target[role]];
        if (!a.controllable[role] && !ok) exit = true;
        if (use_forcible && a.forcible[role] && ok) escape = true;
      }
    }
    return exit && !escape;
  };
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::size_t> found;
    for (std::size_t q = 0; q < total; ++q)
      if (alive[q] && bad(q)) found.push_back(q);
    for (std::size_t q : found) alive[q] = false;
    changed = !found.empty();
  }

  std::size_t init = total - 1;
  std::vector<bool> reach(total, false);
  if (alive[init]) {
    std::vector<std::size_t> queue{init};
    reach[init] = true;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      std::size_t q = queue[i];
      for (std::size_t c = 0; c < k; ++c) {
        int n = count(q, c);
        for (auto t : {n > 0 ? q - stride[c] : q, n < r.class_sizes[c] ? q + stride[c] : q})
          if (alive[t] && !reach[t]) {
            reach[t] = true;
            queue.push_back(t);
          }
      }
    }
  }
  for (std::size_t q = 0; q < total; ++q) {
    if (!reach[q]) continue;
    std::vector<int> v(k);
    for (std::size_t c = 0; c < k; ++c) v[c] = count(q, c);
    r.kept.push_back(v);
    r.kept_states += weight(q);
  }
  std::sort(r.kept.begin(), r.kept.end());
  return r;
}

}  // namespace desgrid::modular
