#pragma once

#include <vector>

namespace desgrid::shed {

// min cost.x  s.t.  rows.x <= rhs,  0 <= x <= upper
struct LinearProgram {
  std::vector<double> cost;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  std::vector<double> upper;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
};

// Dense two-phase tableau simplex. Dantzig pricing with a switch to Bland's
// rule after a run of degenerate pivots; pivots below 1e-9 are rejected.
LpResult solve_min(const LinearProgram& lp);

}  // namespace desgrid::shed
