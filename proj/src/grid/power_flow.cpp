#include "desgrid/grid/power_flow.hpp"

#include <cmath>
#include <cstdio>

#include "desgrid/error.hpp"

namespace desgrid::grid {

namespace {

// Reduced susceptance system of one island with the slack row removed.
struct IslandSystem {
  std::vector<std::size_t> local;  // bus index -> reduced row, or npos
  std::vector<std::size_t> rows;   // reduced row -> bus index
  Eigen::LDLT<Eigen::MatrixXd> ldlt;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  IslandSystem(const GridCase& c, const Island& isl, std::size_t slack)
      : local(c.buses.size(), npos) {
    for (std::size_t b : isl.buses)
      if (b != slack) {
        local[b] = rows.size();
        rows.push_back(b);
      }
    if (rows.empty()) return;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(rows.size(), rows.size());
    for (std::size_t k : isl.branches) {
      const auto& br = c.branches[k];
      double y = 1.0 / br.reactance;
      std::size_t f = local[br.from_index], t = local[br.to_index];
      if (f != npos) B(f, f) += y;
      if (t != npos) B(t, t) += y;
      if (f != npos && t != npos) {
        B(f, t) -= y;
        B(t, f) -= y;
      }
    }
    ldlt.compute(B);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
      throw Error("singular island susceptance system");
    auto d = ldlt.vectorD();
    if (d.minCoeff() <= 1e-12 * std::max(1.0, d.maxCoeff()))
      throw Error("singular island susceptance system");
  }
};

void check_reactances(const GridCase& c) {
  for (std::size_t k = 0; k < c.branches.size(); ++k) {
    const auto& br = c.branches[k];
    if (br.in_service && !(br.reactance > 0 && std::isfinite(1.0 / br.reactance)))
      throw Error("singular island system: branch " + std::to_string(k + 1) +
                  " has non-positive reactance");
  }
}

}  // namespace

std::vector<double> net_injections(const GridCase& c) {
  std::vector<double> p(c.buses.size(), 0.0);
  for (std::size_t b = 0; b < c.buses.size(); ++b) p[b] = -c.buses[b].load_mw;
  for (const auto& g : c.gens)
    if (g.in_service) p[g.bus_index] += g.p_mw;
  return p;
}

FlowSolution dc_power_flow(const GridCase& c) { return dc_power_flow(c, net_injections(c)); }

FlowSolution dc_power_flow(const GridCase& c, const std::vector<double>& injections) {
  if (injections.size() != c.buses.size()) throw Error("injection vector size mismatch");
  check_reactances(c);
  FlowSolution sol;
  sol.angles.assign(c.buses.size(), 0.0);
  sol.flows.assign(c.branches.size(), 0.0);
  sol.injections = injections;

  for (const auto& isl : find_islands(c)) {
    double sum = 0, mag = 0;
    for (std::size_t b : isl.buses) {
      sum += injections[b];
      mag += std::abs(injections[b]);
    }
    if (std::abs(sum) > 1e-6 * std::max(1.0, mag))
      throw Error("unbalanced injections in island of bus " +
                  std::to_string(c.buses[isl.buses.front()].id) + " (" + std::to_string(sum) +
                  " MW)");
    IslandSystem sys(c, isl, island_slack(c, isl));
    if (sys.rows.empty()) continue;
    Eigen::VectorXd rhs(sys.rows.size());
    for (std::size_t r = 0; r < sys.rows.size(); ++r) rhs(r) = injections[sys.rows[r]] / c.base_mva;
    Eigen::VectorXd theta = sys.ldlt.solve(rhs);
    for (std::size_t r = 0; r < sys.rows.size(); ++r) sol.angles[sys.rows[r]] = theta(r);
  }
  for (std::size_t k = 0; k < c.branches.size(); ++k) {
    const auto& br = c.branches[k];
    if (!br.in_service) continue;
    sol.flows[k] = (sol.angles[br.from_index] - sol.angles[br.to_index]) / br.reactance * c.base_mva;
  }
  return sol;
}

namespace {

void fill_island_ptdf(const GridCase& c, const Island& isl, std::size_t slack,
                      Eigen::MatrixXd& out) {
  IslandSystem sys(c, isl, slack);
  if (sys.rows.empty()) return;
  Eigen::MatrixXd X =
      sys.ldlt.solve(Eigen::MatrixXd::Identity(sys.rows.size(), sys.rows.size()));
  for (std::size_t k : isl.branches) {
    const auto& br = c.branches[k];
    std::size_t f = sys.local[br.from_index], t = sys.local[br.to_index];
    for (std::size_t r = 0; r < sys.rows.size(); ++r) {
      double xf = f == IslandSystem::npos ? 0.0 : X(f, r);
      double xt = t == IslandSystem::npos ? 0.0 : X(t, r);
      out(k, sys.rows[r]) = (xf - xt) / br.reactance;
    }
  }
}

}  // namespace

PTDFMatrix compute_ptdf(const GridCase& c, int slack_bus_id) {
  auto slack = c.find_bus(slack_bus_id);
  if (!slack) throw Error("slack bus " + std::to_string(slack_bus_id) + " not in case");
  check_reactances(c);
  PTDFMatrix m;
  m.slack = slack_bus_id;
  m.entries = Eigen::MatrixXd::Zero(c.branches.size(), c.buses.size());
  for (const auto& isl : find_islands(c))
    for (std::size_t b : isl.buses)
      if (b == *slack) {
        fill_island_ptdf(c, isl, *slack, m.entries);
        return m;
      }
  throw Error("slack not in island");
}

PTDFMatrix network_ptdf(const GridCase& c) {
  check_reactances(c);
  PTDFMatrix m;
  m.entries = Eigen::MatrixXd::Zero(c.branches.size(), c.buses.size());
  for (const auto& isl : find_islands(c)) fill_island_ptdf(c, isl, island_slack(c, isl), m.entries);
  return m;
}

double loading(const GridCase& c, const FlowSolution& f, std::size_t branch) {
  const auto& br = c.branches.at(branch);
  if (!br.in_service || br.rating_mw <= 0) return 0.0;
  return std::abs(f.flows.at(branch)) / br.rating_mw;
}

void write_flows_csv(std::ostream& out, const GridCase& c, const FlowSolution& f) {
  out << "branch_id,from,to,flow_mw,rating_mw,loading_pct\n";
  char buf[160];
  for (std::size_t k = 0; k < c.branches.size(); ++k) {
    const auto& br = c.branches[k];
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.6f,%.6f,%.6f\n", GridCase::branch_id(k), br.from,
                  br.to, f.flows[k], br.rating_mw, 100.0 * loading(c, f, k));
    out << buf;
  }
}

}  // namespace desgrid::grid
