#include "desgrid/grid/case.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "desgrid/error.hpp"
#include "desgrid/grid/power_flow.hpp"
#include "desgrid/grid/rebalance.hpp"

namespace desgrid::grid {

void GridCase::finalize() {
  auto idx = std::make_shared<std::unordered_map<int, std::size_t>>();
  for (std::size_t i = 0; i < buses.size(); ++i)
    if (!idx->emplace(buses[i].id, i).second)
      throw Error("duplicate bus id " + std::to_string(buses[i].id));
  auto look = [&](int id, const std::string& what) {
    auto it = idx->find(id);
    if (it == idx->end()) throw Error(what + " references missing bus " + std::to_string(id));
    return it->second;
  };
  for (std::size_t g = 0; g < gens.size(); ++g)
    gens[g].bus_index = look(gens[g].bus, "generator " + std::to_string(g + 1));
  for (std::size_t k = 0; k < branches.size(); ++k) {
    branches[k].from_index = look(branches[k].from, "branch " + std::to_string(k + 1));
    branches[k].to_index = look(branches[k].to, "branch " + std::to_string(k + 1));
  }
  index_ = std::move(idx);
}

std::optional<std::size_t> GridCase::find_bus(int id) const {
  if (!index_) throw Error("case not finalized");
  auto it = index_->find(id);
  if (it == index_->end()) return std::nullopt;
  return it->second;
}

std::size_t GridCase::bus_index(int id) const {
  auto i = find_bus(id);
  if (!i) throw Error("unknown bus " + std::to_string(id));
  return *i;
}

std::size_t GridCase::branch_index(int branch_id) const {
  if (branch_id < 1 || static_cast<std::size_t>(branch_id) > branches.size())
    throw Error("unknown branch " + std::to_string(branch_id));
  return static_cast<std::size_t>(branch_id - 1);
}

double GridCase::total_load() const {
  double s = 0;
  for (const auto& b : buses) s += b.load_mw;
  return s;
}

double GridCase::total_generation() const {
  double s = 0;
  for (const auto& g : gens)
    if (g.in_service) s += g.p_mw;
  return s;
}

std::size_t GridCase::in_service_branch_count() const {
  return static_cast<std::size_t>(
      std::count_if(branches.begin(), branches.end(), [](const Branch& b) { return b.in_service; }));
}

GridCase prepare_case(GridCase c, const RatingRepair& repair, PrepareReport* report) {
  PrepareReport local;
  PrepareReport& rep = report ? *report : local;
  for (std::size_t k = 0; k < c.branches.size(); ++k) {
    auto& br = c.branches[k];
    if (br.reactance > 0) continue;
    br.reactance = br.reactance < 0 ? -br.reactance : 1e-4;
    rep.repaired_reactances.push_back(GridCase::branch_id(k));
  }
  for (auto& g : c.gens) {
    if (!g.in_service) {
      g.p_mw = 0;
      continue;
    }
    g.p_mw = std::clamp(g.p_mw, g.p_min, g.p_max);
  }
  auto balanced = rebalance_all(c);
  c = std::move(balanced.grid);
  rep.base_rebalance_mw = balanced.mw_lost;

  auto flows = dc_power_flow(c);
  for (std::size_t k = 0; k < c.branches.size(); ++k) {
    auto& br = c.branches[k];
    if (br.rating_mw > 0) continue;
    br.rating_mw = std::max(repair.alpha * std::abs(flows.flows[k]), repair.floor_mw);
    rep.repaired_ratings.push_back(GridCase::branch_id(k));
  }
  return c;
}

GridCase load_case(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_case(buf.str(), path.stem().string());
}

}  // namespace desgrid::grid
