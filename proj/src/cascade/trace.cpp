#include "desgrid/cascade/trace.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>

namespace desgrid::cascade {

const char* kind_name(TraceKind k) {
  switch (k) {
    case TraceKind::LineTrip: return "line_trip";
    case TraceKind::LoadShed: return "load_shed";
    case TraceKind::Redispatch: return "redispatch";
    case TraceKind::Rebalance: return "rebalance";
    case TraceKind::GenTrip: return "gen_trip";
  }
  return "?";
}

const char* termination_name(Termination t) {
  return t == Termination::Converged ? "converged" : "tick_cap";
}

void write_trace_csv(std::ostream& out, const CascadeTrace& t) {
  out << "tick,kind,subject,mw\n";
  char buf[128];
  for (const auto& e : t.events) {
    std::snprintf(buf, sizeof buf, "%d,%s,%d,%.6f\n", e.tick, kind_name(e.kind), e.subject, e.mw);
    out << buf;
  }
}

namespace {

double round6(double v) { return std::round(v * 1e6) / 1e6; }

}  // namespace

std::string trace_summary_json(const CascadeTrace& t) {
  nlohmann::ordered_json j;
  j["mw_lost_total"] = round6(t.mw_lost_total);
  j["mw_lost_rebalance"] = round6(t.mw_lost_rebalance);
  j["mw_lost_control"] = round6(t.mw_lost_control);
  j["line_trip_count"] = t.line_trip_count;
  j["terminated"] = termination_name(t.terminated);
  return j.dump(2) + "\n";
}

}  // namespace desgrid::cascade
