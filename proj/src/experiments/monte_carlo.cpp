#include "desgrid/experiments/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <memory>
#include <thread>

#include "desgrid/error.hpp"

namespace desgrid::experiments {

const ModeResults* AggregateResults::find(cascade::ControlMode m) const {
  for (const auto& r : modes)
    if (r.mode == m) return &r;
  return nullptr;
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error("median of an empty sample");
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<CcdPoint> compute_ccd(std::vector<double> samples) {
  if (samples.empty()) throw Error("CCD of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  std::vector<CcdPoint> out;
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (i == 0 || samples[i] != samples[i - 1])
      out.push_back({samples[i], static_cast<double>(samples.size() - i) / n});
  return out;
}

double ccd_at(const std::vector<CcdPoint>& ccd, double x) {
  auto it = std::lower_bound(ccd.begin(), ccd.end(), x,
                             [](const CcdPoint& p, double v) { return p.x < v; });
  return it == ccd.end() ? 0.0 : it->fraction;
}

grid::GridCase load_prepared_case(const std::string& name_or_path,
                                  const std::filesystem::path& data_dir) {
  std::filesystem::path p = name_or_path;
  if (!std::filesystem::exists(p)) {
    auto named = data_dir / (name_or_path + ".m");
    if (std::filesystem::exists(named)) p = named;
  }
  if (!std::filesystem::exists(p)) throw Error("case not found: " + name_or_path);
  return grid::prepare_case(grid::load_case(p));
}

std::vector<ScenarioSummary> run_scenarios(const MonteCarloConfig& config, const grid::GridCase& prepared,
                                           const modular::SupervisorLibrary* controllers,
                                           cascade::ControlMode mode, const std::vector<int>& ids) {
  std::vector<ScenarioSummary> out(ids.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < ids.size();) {
      ScenarioSummary& s = out[i];
      s.id = ids[i];
      s.mode = mode;
      try {
        auto sc = sample_scenario(config, prepared, static_cast<std::uint64_t>(ids[i]));
        sc.mode = mode;
        s.from_branch = sc.initial_outage[0];
        s.to_branch = sc.initial_outage[1];
        auto t = cascade::run_cascade(prepared, sc, controllers);
        s.mw_lost_total = t.mw_lost_total;
        s.mw_lost_rebalance = t.mw_lost_rebalance;
        s.mw_lost_control = t.mw_lost_control;
        s.line_trips = t.line_trip_count;
        s.terminated = t.terminated;
      } catch (const std::exception& e) {
        s.failed = true;
        s.error = e.what();
      }
    }
  };
  int workers = std::max(1, std::min<int>(config.workers, static_cast<int>(ids.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return out;
}

AggregateResults aggregate(const MonteCarloConfig& config, std::vector<ScenarioSummary> summaries) {
  AggregateResults agg;
  agg.config = config;
  std::stable_sort(summaries.begin(), summaries.end(),
                   [](const auto& a, const auto& b) { return a.id < b.id; });
  for (auto mode : config.modes) {
    ModeResults r;
    r.mode = mode;
    std::vector<double> mw, trips;
    for (const auto& s : summaries) {
      if (s.mode != mode) continue;
      r.scenarios.push_back(s);
      if (s.failed) {
        ++r.failed;
        continue;
      }
      mw.push_back(s.mw_lost_total);
      trips.push_back(s.line_trips);
    }
    if (!mw.empty()) {
      r.median_mw_lost = median(mw);
      r.median_line_trips = median(trips);
      r.ccd_blackout = compute_ccd(mw);
      r.ccd_trips = compute_ccd(trips);
    }
    agg.modes.push_back(std::move(r));
  }
  return agg;
}

AggregateResults run_monte_carlo(const MonteCarloConfig& config, const grid::GridCase& prepared,
                                 const modular::SupervisorLibrary* controllers) {
  validate_config(config);
  std::unique_ptr<modular::SupervisorLibrary> owned;
  bool modular = std::find(config.modes.begin(), config.modes.end(), cascade::ControlMode::Modular) !=
                 config.modes.end();
  if (modular && !controllers) {
    owned = std::make_unique<modular::SupervisorLibrary>(prepared);
    controllers = owned.get();
  }
  std::vector<int> ids(config.n_scenarios);
  for (int i = 0; i < config.n_scenarios; ++i) ids[i] = i;
  std::vector<ScenarioSummary> all;
  for (auto mode : config.modes) {
    auto part = run_scenarios(config, prepared, controllers, mode, ids);
    all.insert(all.end(), part.begin(), part.end());
  }
  return aggregate(config, std::move(all));
}

}  // namespace desgrid::experiments
