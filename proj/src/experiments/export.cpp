#include "desgrid/experiments/export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "desgrid/error.hpp"

namespace desgrid::experiments {

namespace {

double round6(double v) { return std::round(v * 1e6) / 1e6; }

std::string clean(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << body;
  out.flush();
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace

std::string summary_json(const AggregateResults& agg) {
  nlohmann::ordered_json j;
  j["case"] = agg.config.case_name;
  j["n_scenarios"] = agg.config.n_scenarios;
  j["seed"] = agg.config.seed;
  j["sigma"] = agg.config.sigma;
  j["delay_ticks"] = agg.config.delay_ticks;
  j["max_ticks"] = agg.config.max_ticks;
  auto modes = nlohmann::ordered_json::array();
  for (const auto& r : agg.modes) {
    nlohmann::ordered_json m;
    m["mode"] = cascade::mode_name(r.mode);
    m["scenarios"] = r.scenarios.size();
    m["failed"] = r.failed;
    m["median_mw_lost_total"] = round6(r.median_mw_lost);
    m["median_line_trips"] = r.median_line_trips;
    int capped = 0;
    for (const auto& s : r.scenarios) capped += !s.failed && s.terminated == cascade::Termination::TickCap;
    m["tick_cap"] = capped;
    modes.push_back(std::move(m));
  }
  j["modes"] = std::move(modes);
  return j.dump(2) + "\n";
}

void write_scenarios_csv(std::ostream& out, const AggregateResults& agg) {
  out << "scenario,mode,from_branch,to_branch,mw_lost_total,mw_lost_rebalance,mw_lost_control,"
         "line_trips,terminated,status,error\n";
  char buf[256];
  for (const auto& r : agg.modes)
    for (const auto& s : r.scenarios) {
      std::snprintf(buf, sizeof buf, "%d,%s,%d,%d,%.6f,%.6f,%.6f,%d,%s,%s,", s.id, cascade::mode_name(s.mode),
                    s.from_branch, s.to_branch, s.mw_lost_total, s.mw_lost_rebalance, s.mw_lost_control,
                    s.line_trips, cascade::termination_name(s.terminated), s.failed ? "failed" : "ok");
      out << buf << clean(s.error) << '\n';
    }
}

void write_ccd_csv(std::ostream& out, const std::vector<CcdPoint>& ccd, const char* x_name) {
  out << x_name << ",fraction\n";
  char buf[96];
  for (const auto& p : ccd) {
    std::snprintf(buf, sizeof buf, "%.6f,%.9f\n", p.x, p.fraction);
    out << buf;
  }
}

void export_results(const AggregateResults& agg, const std::filesystem::path& out_dir) {
  if (agg.modes.empty()) throw Error("no control modes to export");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create directory " + out_dir.string() + ": " + ec.message());
  write_file(out_dir / "summary.json", summary_json(agg));
  std::ostringstream sc;
  write_scenarios_csv(sc, agg);
  write_file(out_dir / "scenarios.csv", sc.str());
  for (const auto& r : agg.modes) {
    std::string m = cascade::mode_name(r.mode);
    std::ostringstream b, t;
    write_ccd_csv(b, r.ccd_blackout, "mw_lost_total");
    write_ccd_csv(t, r.ccd_trips, "line_trips");
    write_file(out_dir / ("ccd_blackout_" + m + ".csv"), b.str());
    write_file(out_dir / ("ccd_trips_" + m + ".csv"), t.str());
  }
}

std::vector<ScenarioSummary> read_scenarios_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<ScenarioSummary> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() < 10) throw ParseError(path.string() + ": expected at least 10 columns", lineno);
    try {
      ScenarioSummary s;
      s.id = std::stoi(f[0]);
      s.mode = cascade::parse_mode(f[1]);
      s.from_branch = std::stoi(f[2]);
      s.to_branch = std::stoi(f[3]);
      s.mw_lost_total = std::stod(f[4]);
      s.mw_lost_rebalance = std::stod(f[5]);
      s.mw_lost_control = std::stod(f[6]);
      s.line_trips = std::stoi(f[7]);
      s.terminated = f[8] == "tick_cap" ? cascade::Termination::TickCap : cascade::Termination::Converged;
      s.failed = f[9] == "failed";
      if (f.size() > 10) s.error = f[10];
      out.push_back(std::move(s));
    } catch (const std::logic_error&) {
      throw ParseError(path.string() + ": malformed row", lineno);
    }
  }
  return out;
}

}  // namespace desgrid::experiments
