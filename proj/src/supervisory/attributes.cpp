#include "desgrid/supervisory/attributes.hpp"

#include <cctype>

#include "desgrid/error.hpp"

namespace desgrid::supervisory {

des::EventTable modified_attributes(const des::EventTable& t) {
  des::EventTable out = t;
  for (des::EventId id = 0; id < t.size(); ++id) {
    const std::string& label = t.label(id);
    bool digits = label.size() >= 2;
    for (std::size_t i = 1; i < label.size(); ++i)
      digits = digits && std::isdigit(static_cast<unsigned char>(label[i]));
    if (!digits) throw Error("unknown label pattern '" + label + "'");
    switch (label[0]) {
      case 'e': case 'k': case 'a':
        out.set_attributes(id, true, false);
        break;
      case 'f': case 'b':
        out.set_attributes(id, true, true);
        break;
      case 'g': case 'u': case 'h': case 'c':
        out.set_attributes(id, false, false);
        break;
      default:
        throw Error("unknown label pattern '" + label + "'");
    }
  }
  return out;
}

}  // namespace desgrid::supervisory
