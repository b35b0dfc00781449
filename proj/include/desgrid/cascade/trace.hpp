#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "desgrid/des/automaton.hpp"

namespace desgrid::cascade {

enum class TraceKind { LineTrip, LoadShed, Redispatch, Rebalance, GenTrip };
enum class Termination { Converged, TickCap };

const char* kind_name(TraceKind k);
const char* termination_name(Termination t);

// subject: branch id, bus id, generator id, or the least bus id of the island
// for rebalance entries.
struct TraceEvent {
  int tick = 0;
  TraceKind kind = TraceKind::LineTrip;
  int subject = 0;
  double mw = 0.0;
};

struct CascadeTrace {
  std::vector<TraceEvent> events;
  double mw_lost_rebalance = 0.0;
  double mw_lost_control = 0.0;
  double mw_lost_total = 0.0;
  int line_trip_count = 0;
  Termination terminated = Termination::Converged;
  int ticks = 0;
  des::EventString des_events;   // global event string emitted to the supervisors
  int supervisor_exits = 0;      // members that lost their realization
  int vetoed_actions = 0;        // actions dropped because another member disabled them
};

void write_trace_csv(std::ostream& out, const CascadeTrace& t);
std::string trace_summary_json(const CascadeTrace& t);

}  // namespace desgrid::cascade
