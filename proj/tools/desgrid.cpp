#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>

#include "desgrid/cascade/engine.hpp"
#include "desgrid/des/components.hpp"
#include "desgrid/des/operations.hpp"
#include "desgrid/error.hpp"
#include "desgrid/experiments/export.hpp"
#include "desgrid/grid/islands.hpp"
#include "desgrid/modular/bundle.hpp"
#include "desgrid/modular/symmetric.hpp"
#include "desgrid/supervisory/attributes.hpp"
#include "desgrid/supervisory/synthesis.hpp"

namespace fs = std::filesystem;
using namespace desgrid;
using json = nlohmann::ordered_json;

namespace {

struct Args {
  std::string case_name = "case30";
  std::string pair;
  std::vector<std::string> modes;
  int delay = 0;
  std::uint64_t seed = 1;
  int n = 200;
  double sigma = 0.15;
  std::string out;
  std::string in;
  int workers = 1;
  int max_ticks = 100;
  std::vector<int> nodes;
  int hops = 1;
};

double round6(double v) { return std::round(v * 1e6) / 1e6; }

grid::GridCase prepared(const Args& a) { return experiments::load_prepared_case(a.case_name, DESGRID_DATA_DIR); }

std::vector<int> parse_pair(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw Error("--pair expects A,B");
  try {
    return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
  } catch (const std::logic_error&) {
    throw Error("--pair expects two integers, got '" + text + "'");
  }
}

std::vector<cascade::ControlMode> parse_modes(const std::vector<std::string>& raw) {
  std::vector<cascade::ControlMode> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    for (std::string m; std::getline(ss, m, ',');)
      if (!m.empty()) out.push_back(cascade::parse_mode(m));
  }
  return out;
}

void write_text(const fs::path& p, const std::string& body) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + p.string());
  f << body;
}

int cmd_parse_case(const Args& a) {
  auto raw = grid::load_case(fs::exists(a.case_name) ? fs::path(a.case_name)
                                                     : fs::path(DESGRID_DATA_DIR) / (a.case_name + ".m"));
  grid::PrepareReport rep;
  auto c = grid::prepare_case(raw, {}, &rep);
  auto flows = grid::dc_power_flow(c);
  double worst = 0;
  for (std::size_t k = 0; k < c.branches.size(); ++k)
    if (c.branches[k].in_service) worst = std::max(worst, grid::loading(c, flows, k));
  json j;
  j["name"] = c.name;
  j["buses"] = c.buses.size();
  j["generators"] = c.gens.size();
  j["branches"] = c.branches.size();
  j["in_service_branches"] = c.in_service_branch_count();
  j["islands"] = grid::find_islands(c).size();
  j["total_load_mw"] = round6(c.total_load());
  j["total_generation_mw"] = round6(c.total_generation());
  j["repaired_ratings"] = rep.repaired_ratings.size();
  j["repaired_reactances"] = rep.repaired_reactances;
  j["max_loading_pct"] = round6(100 * worst);
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    std::ofstream f(fs::path(a.out) / "flows.csv", std::ios::binary);
    grid::write_flows_csv(f, c, flows);
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_build_supervisors(const Args& a) {
  if (a.out.empty()) throw Error("--out is required");
  auto c = prepared(a);
  modular::SupervisorOptions opt;
  opt.hops = a.hops;
  modular::SupervisorLibrary lib(c, opt);
  modular::write_bundle(lib, a.out, a.nodes);
  json j;
  j["case"] = c.name;
  j["nodes"] = a.nodes.empty() ? lib.nodes().size() : a.nodes.size();
  j["out"] = a.out;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_run_scenario(const Args& a) {
  auto c = prepared(a);
  cascade::ScenarioConfig s;
  if (!a.pair.empty()) s.initial_outage = parse_pair(a.pair);
  auto modes = parse_modes(a.modes);
  if (modes.size() > 1) throw Error("run-scenario takes a single --mode");
  s.mode = modes.empty() ? cascade::ControlMode::None : modes.front();
  s.delay_ticks = a.delay;
  s.max_ticks = a.max_ticks;
  std::unique_ptr<modular::SupervisorLibrary> lib;
  if (s.mode == cascade::ControlMode::Modular) lib = std::make_unique<modular::SupervisorLibrary>(c);
  auto t = cascade::run_cascade(c, s, lib.get());
  auto summary = cascade::trace_summary_json(t);
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    std::ostringstream csv;
    cascade::write_trace_csv(csv, t);
    write_text(fs::path(a.out) / "trace.csv", csv.str());
    write_text(fs::path(a.out) / "summary.json", summary);
  }
  std::cout << summary;
  return 0;
}

int cmd_monte_carlo(const Args& a) {
  if (a.out.empty()) throw Error("--out is required");
  experiments::MonteCarloConfig cfg;
  cfg.case_name = a.case_name;
  cfg.n_scenarios = a.n;
  cfg.seed = a.seed;
  cfg.sigma = a.sigma;
  if (!a.modes.empty()) cfg.modes = parse_modes(a.modes);
  cfg.delay_ticks = a.delay;
  cfg.max_ticks = a.max_ticks;
  cfg.workers = a.workers;
  experiments::validate_config(cfg);
  auto c = prepared(a);
  auto agg = experiments::run_monte_carlo(cfg, c);
  experiments::export_results(agg, a.out);
  std::cout << experiments::summary_json(agg);
  return 0;
}

int cmd_ccd(const Args& a) {
  if (a.in.empty() || a.out.empty()) throw Error("--in and --out are required");
  auto rows = experiments::read_scenarios_csv(a.in);
  if (rows.empty()) throw Error("no scenarios in " + a.in);
  experiments::MonteCarloConfig cfg;
  cfg.case_name = a.case_name;
  cfg.modes.clear();
  std::map<cascade::ControlMode, int> count;
  for (const auto& r : rows) {
    if (!count.count(r.mode)) cfg.modes.push_back(r.mode);
    ++count[r.mode];
  }
  cfg.n_scenarios = 0;
  for (auto [m, k] : count) cfg.n_scenarios = std::max(cfg.n_scenarios, k);
  auto agg = experiments::aggregate(cfg, std::move(rows));
  experiments::export_results(agg, a.out);
  std::cout << experiments::summary_json(agg);
  return 0;
}

// verify: quick property runs on small instances.

json check(const char* name, bool ok, json detail) {
  json j;
  j["check"] = name;
  j["ok"] = ok;
  j["detail"] = std::move(detail);
  return j;
}

json verify_two_node() {
  auto table = std::make_shared<des::EventTable>();
  using des::ComponentType;
  std::vector<des::Automaton> parts;
  for (auto k : {des::ComponentKind{ComponentType::Generator, 1}, des::ComponentKind{ComponentType::Line, 1},
                 des::ComponentKind{ComponentType::Load, 1}, des::ComponentKind{ComponentType::Line, 2},
                 des::ComponentKind{ComponentType::Line, 3}})
    parts.push_back(des::build_component(table, k));
  auto plant = std::make_shared<const des::Automaton>(des::compose_all(parts));
  std::vector<bool> legal(plant->state_count(), true);
  std::size_t illegal = 0;
  for (std::size_t q = 0; q < legal.size(); ++q)
    if (modular::all_tripped(plant->state_label(q))) legal[q] = false, ++illegal;
  auto spec = supervisory::SpecificationAutomaton::from_legal_states(plant, legal);
  auto sup = supervisory::supremal_f_controllable(spec);
  json d;
  d["plant_states"] = plant->state_count();
  d["spec_states"] = spec.spec().state_count();
  d["realization_states"] = sup.realization.state_count();
  bool ok = plant->state_count() == 32 && illegal == 1 && spec.spec().state_count() == 31 &&
            sup.realization.state_count() == 31;
  return check("two_node_example", ok, d);
}

json verify_random_synthesis(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int failures = 0;
  for (int i = 0; i < n; ++i) {
    auto table = std::make_shared<des::EventTable>();
    int ne = 1 + static_cast<int>(rng() % 4), ns = 1 + static_cast<int>(rng() % 5);
    for (int e = 0; e < ne; ++e) {
      bool c = rng() % 2;
      table->add("e" + std::to_string(e), c, c && rng() % 2);
    }
    des::AutomatonBuilder b("P", table);
    for (int s = 0; s < ns; ++s) b.add_state("s" + std::to_string(s));
    for (int s = 0; s < ns; ++s)
      for (int e = 0; e < ne; ++e)
        if (rng() % 2) b.add_transition(s, e, static_cast<des::StateId>(rng() % ns));
    auto plant = std::make_shared<const des::Automaton>(b.build());
    std::vector<bool> legal(plant->state_count());
    for (std::size_t q = 0; q < legal.size(); ++q) legal[q] = q == 0 || rng() % 3;
    auto spec = supervisory::SpecificationAutomaton::from_legal_states(plant, legal);
    auto sup = supervisory::supremal_f_controllable(spec);
    if (sup.empty()) continue;
    bool ok = supervisory::check_f_controllable(sup.as_specification()).ok;
    for (std::size_t q = 0; q < sup.realization.state_count(); ++q) ok = ok && legal[sup.plant_state(q)];
    failures += !ok;
  }
  json d;
  d["instances"] = n;
  d["failures"] = failures;
  return check("supremal_is_f_controllable", failures == 0, d);
}

json verify_table3(const grid::GridCase& c) {
  modular::SupervisorOptions opt;
  modular::SupervisorLibrary lib(c, opt);
  auto modified = std::make_shared<des::EventTable>(supervisory::modified_attributes(*lib.model().events()));
  int mismatches = 0;
  for (int node : lib.nodes()) {
    const auto& sub = lib.subsystem(node);
    auto f = modular::symmetric_synthesis(modular::component_attributes(lib.model(), sub, *lib.model().events()), true);
    auto g = modular::symmetric_synthesis(modular::component_attributes(lib.model(), sub, *modified), false);
    mismatches += f.kept != g.kept;
  }
  json d;
  d["nodes"] = lib.nodes().size();
  d["mismatches"] = mismatches;
  return check("modified_attribute_equivalence", mismatches == 0, d);
}

json verify_power_flow(const grid::GridCase& c) {
  auto f = grid::dc_power_flow(c);
  double worst = 0;
  std::vector<double> net(c.buses.size(), 0.0);
  for (std::size_t k = 0; k < c.branches.size(); ++k) {
    if (!c.branches[k].in_service) continue;
    net[c.branches[k].from_index] -= f.flows[k];
    net[c.branches[k].to_index] += f.flows[k];
  }
  for (std::size_t b = 0; b < net.size(); ++b) worst = std::max(worst, std::abs(net[b] + f.injections[b]));
  json d;
  d["max_bus_mismatch_mw"] = worst;
  return check("bus_conservation", worst <= 1e-9 * std::max(1.0, c.total_load()), d);
}

int cmd_verify(const Args& a) {
  auto c = prepared(a);
  json checks = json::array();
  checks.push_back(verify_two_node());
  checks.push_back(verify_random_synthesis(a.n, a.seed));
  checks.push_back(verify_table3(c));
  checks.push_back(verify_power_flow(c));
  bool ok = true;
  for (const auto& ch : checks) ok = ok && ch["ok"].get<bool>();
  json j;
  j["case"] = c.name;
  j["ok"] = ok;
  j["checks"] = checks;
  std::cout << j.dump(2) << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modular supervisory control of cascading failures"};
  app.require_subcommand(1);
  Args a;
  auto add_case = [&](CLI::App* s) { s->add_option("--case", a.case_name, "case name in the data directory or a path"); };

  auto* parse = app.add_subcommand("parse-case", "load a case and report its base state");
  add_case(parse);
  parse->add_option("--out", a.out, "directory for flows.csv");

  auto* build = app.add_subcommand("build-supervisors", "synthesize node supervisors and write a bundle");
  add_case(build);
  build->add_option("--out", a.out)->required();
  build->add_option("--node", a.nodes, "bus ids (default all)");
  build->add_option("--hops", a.hops)->check(CLI::NonNegativeNumber);

  auto* run = app.add_subcommand("run-scenario", "simulate one N-2 cascade");
  add_case(run);
  run->add_option("--pair", a.pair, "initial outage A,B (branch ids)");
  run->add_option("--mode", a.modes, "none | modular | central");
  run->add_option("--delay", a.delay)->check(CLI::NonNegativeNumber);
  run->add_option("--max-ticks", a.max_ticks);
  run->add_option("--out", a.out);

  auto* mc = app.add_subcommand("monte-carlo", "sampled N-2 scenarios under each mode");
  add_case(mc);
  mc->add_option("--n", a.n);
  mc->add_option("--seed", a.seed);
  mc->add_option("--sigma", a.sigma);
  mc->add_option("--mode", a.modes, "comma separated; default all three");
  mc->add_option("--delay", a.delay)->check(CLI::NonNegativeNumber);
  mc->add_option("--workers", a.workers);
  mc->add_option("--max-ticks", a.max_ticks);
  mc->add_option("--out", a.out)->required();

  auto* ccd = app.add_subcommand("ccd", "recompute medians and CCDs from scenarios.csv");
  ccd->add_option("--in", a.in)->required();
  ccd->add_option("--out", a.out)->required();
  add_case(ccd);

  auto* verify = app.add_subcommand("verify", "property checks on small instances");
  add_case(verify);
  verify->add_option("--n", a.n, "random plants");
  verify->add_option("--seed", a.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    if (*parse) return cmd_parse_case(a);
    if (*build) return cmd_build_supervisors(a);
    if (*run) return cmd_run_scenario(a);
    if (*mc) return cmd_monte_carlo(a);
    if (*ccd) return cmd_ccd(a);
    if (*verify) return cmd_verify(a);
  } catch (const std::exception& e) {
    json j;
    j["error"] = e.what();
    std::cerr << j.dump() << "\n";
    return 2;
  }
  return 1;
}
