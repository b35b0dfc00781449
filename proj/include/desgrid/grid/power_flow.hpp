#pragma once

#include <Eigen/Dense>
#include <ostream>
#include <vector>

#include "desgrid/grid/case.hpp"
#include "desgrid/grid/islands.hpp"

namespace desgrid::grid {

struct FlowSolution {
  std::vector<double> angles;      // radians, per bus; 0 at each island slack
  std::vector<double> flows;       // MW per branch, from->to positive; 0 when out of service
  std::vector<double> injections;  // MW per bus
};

// Generation minus load per bus.
std::vector<double> net_injections(const GridCase& c);

FlowSolution dc_power_flow(const GridCase& c, const std::vector<double>& injections);
FlowSolution dc_power_flow(const GridCase& c);

// entries(k, b): MW on branch k per MW injected at bus b and withdrawn at the
// slack. For the whole-network form each island uses its own slack and
// columns only couple to branches of the same island.
struct PTDFMatrix {
  int slack = 0;  // bus id; 0 for the per-island network form
  Eigen::MatrixXd entries;
};

PTDFMatrix compute_ptdf(const GridCase& c, int slack_bus_id);
PTDFMatrix network_ptdf(const GridCase& c);

double loading(const GridCase& c, const FlowSolution& f, std::size_t branch);

void write_flows_csv(std::ostream& out, const GridCase& c, const FlowSolution& f);

}  // namespace desgrid::grid
