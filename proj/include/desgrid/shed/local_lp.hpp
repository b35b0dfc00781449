#pragma once

#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "desgrid/grid/power_flow.hpp"
#include "desgrid/shed/simplex.hpp"

namespace desgrid::shed {

struct Neighborhood {
  std::vector<std::size_t> buses;     // bus indices
  std::vector<std::size_t> branches;  // branch indices
};

// Generators absorbing the shed of one island, with their shares.
struct BalanceGroup {
  std::vector<std::size_t> vars;
  double headroom = 0.0;
  std::vector<std::pair<std::size_t, double>> gens;  // (generator index, share)
};

struct ShedLP {
  int node = 0;                            // 0 for the network-wide problem
  std::vector<std::size_t> buses;          // variable -> bus index
  std::vector<double> upper;               // current load per variable
  std::vector<std::vector<double>> flow_rows;
  // Two rows per branch: along the present flow (rhs rating - |flow|), then
  // against it (rhs rating + |flow|).
  std::vector<double> rhs;
  std::vector<std::size_t> row_branches;   // row -> branch index
  std::optional<std::size_t> critical_row;
  std::vector<BalanceGroup> groups;
  // Free redispatch columns (network-wide problem only). Column layout is
  // loads, then raise per unit, then lower per unit; flow rows span all of it
  // and each balance row must equal zero.
  std::vector<std::size_t> gens;
  std::vector<double> raise_cap;
  std::vector<double> lower_cap;
  std::vector<std::vector<double>> balance_rows;
};

struct ShedSolution {
  LpStatus status = LpStatus::Infeasible;
  int node = 0;
  std::vector<std::size_t> buses;
  std::vector<double> x;
  std::vector<std::pair<std::size_t, double>> redispatch;  // (generator index, MW delta)
  double objective = 0.0;
};

struct LpOptions {
  bool constrain_all_branches = true;  // false: only the critical line
  // When set, only these generators take part in redispatch if they have
  // headroom in the island; otherwise every unit of the island does.
  const std::vector<bool>* participating = nullptr;
};

// Branch with the largest |flow|/rating; ties go to the lower branch id.
std::size_t select_critical_line(const grid::GridCase& c, const grid::FlowSolution& f,
                                 const std::vector<std::size_t>& branches);

// Variables are the positive loads of the neighborhood buses. Each row is a
// monitored branch oriented along its present flow; the sensitivity of a shed
// combines the bus PTDF with the generators that absorb it.
ShedLP formulate_local_lp(const grid::GridCase& c, const grid::FlowSolution& f,
                          const grid::PTDFMatrix& ptdf, int node, std::size_t critical,
                          const Neighborhood& hood, const LpOptions& options = {});

// Every positive load and every in-service branch of the network; each
// in-service unit may move anywhere within its limits as long as every
// island stays balanced.
ShedLP formulate_global_lp(const grid::GridCase& c, const grid::FlowSolution& f,
                           const grid::PTDFMatrix& ptdf);

ShedSolution solve_lp(const ShedLP& lp);

struct ApplyResult {
  grid::GridCase grid;
  double mw_lost_control = 0.0;
  bool fallback = false;       // generation could not absorb the shed
  double fallback_lost = 0.0;  // load lost by the fallback rebalance
};

ApplyResult apply_control(const grid::GridCase& c, const ShedSolution& sol);

// Bus injection changes implied by a solution: +x at shed buses, the
// redispatch deltas at generator buses.
std::vector<double> injection_change(const grid::GridCase& c, const ShedSolution& sol);

void write_shed_csv(std::ostream& out, const grid::GridCase& c,
                    const std::vector<ShedSolution>& sols);
void write_redispatch_csv(std::ostream& out, const std::vector<ShedSolution>& sols);

}  // namespace desgrid::shed
