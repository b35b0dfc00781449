#pragma once

#include "desgrid/des/event_table.hpp"

namespace desgrid::supervisory {

// Attributes used to drive a controllability-only synthesis: trip events
// become controllable (a forcible event can preempt them); change events of
// loads and generators stay controllable and forcible; everything else stays
// uncontrollable. Labels must look like <letter><index>.
des::EventTable modified_attributes(const des::EventTable& t);

}  // namespace desgrid::supervisory
