#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace desgrid::des {

using EventId = std::uint32_t;

struct EventInfo {
  std::string label;
  bool controllable = false;
  bool forcible = false;
};

// Registry of event labels. Ids are dense and never reused.
class EventTable {
 public:
  // Throws on empty or duplicate label.
  EventId add(std::string label, bool controllable, bool forcible);
  // Returns the existing id when attributes agree; throws on a mismatch.
  EventId intern(std::string label, bool controllable, bool forcible);

  std::optional<EventId> find(std::string_view label) const;
  EventId at(std::string_view label) const;

  const EventInfo& operator[](EventId id) const { return entries_.at(id); }
  const std::string& label(EventId id) const { return entries_.at(id).label; }
  bool controllable(EventId id) const { return entries_.at(id).controllable; }
  bool forcible(EventId id) const { return entries_.at(id).forcible; }

  std::size_t size() const { return entries_.size(); }
  const std::vector<EventInfo>& entries() const { return entries_; }

  // Same labels and ids, attributes replaced.
  void set_attributes(EventId id, bool controllable, bool forcible);

 private:
  std::vector<EventInfo> entries_;
  std::map<std::string, EventId, std::less<>> index_;
};

}  // namespace desgrid::des
