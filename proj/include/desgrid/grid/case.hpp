#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace desgrid::grid {

struct Bus {
  int id = 0;
  double load_mw = 0.0;
};

struct Generator {
  int bus = 0;
  double p_mw = 0.0;
  double p_max = 0.0;
  double p_min = 0.0;
  bool in_service = true;
  std::size_t bus_index = 0;
};

struct Branch {
  int from = 0;
  int to = 0;
  double reactance = 0.0;  // per unit
  double rating_mw = 0.0;
  bool in_service = true;
  std::size_t from_index = 0;
  std::size_t to_index = 0;
};

// Value-type network snapshot. Branch ids are 1-based row numbers; generator
// ids likewise.
class GridCase {
 public:
  std::string name;
  double base_mva = 100.0;
  std::vector<Bus> buses;
  std::vector<Generator> gens;
  std::vector<Branch> branches;

  // Resolves bus references; throws on a dangling bus or a duplicate id.
  void finalize();

  std::size_t bus_index(int id) const;
  std::optional<std::size_t> find_bus(int id) const;
  std::size_t branch_index(int branch_id) const;
  static int branch_id(std::size_t k) { return static_cast<int>(k) + 1; }

  double total_load() const;
  double total_generation() const;
  std::size_t in_service_branch_count() const;

 private:
  std::shared_ptr<const std::unordered_map<int, std::size_t>> index_;
};

struct RatingRepair {
  double alpha = 2.0;
  double floor_mw = 10.0;
};

struct PrepareReport {
  std::vector<int> repaired_ratings;     // branch ids
  std::vector<int> repaired_reactances;  // branch ids
  double base_rebalance_mw = 0.0;
};

// Makes a parsed case simulation-ready: non-positive reactances are replaced
// by their magnitude (1e-4 when zero), dispatch is balanced against load, and
// zero ratings become max(alpha * |base flow|, floor).
GridCase prepare_case(GridCase c, const RatingRepair& repair = {}, PrepareReport* report = nullptr);

GridCase parse_case(std::string_view text, std::string name = "case");
GridCase load_case(const std::filesystem::path& path);

}  // namespace desgrid::grid
