#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scoop/ids.hpp"

namespace scoop {

enum class EventKind {
  region_created,
  object_created,
  call_logged,
  reservation_queued,
  wait_checked_true,
  wait_checked_false,
  reservation_acquired,
  application_started,
  application_completed,
  query_issued,
  query_result,
  exception,
  reservation_released,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);

/// Ordered `key=value` pairs. Values containing spaces, quotes or nothing at
/// all are written in double quotes with backslash escapes.
class Detail {
 public:
  Detail() = default;
  Detail(std::initializer_list<std::pair<std::string, std::string>> items) : items_(items) {}

  Detail& add(std::string key, std::string value);
  [[nodiscard]] std::optional<std::string_view> find(std::string_view key) const;
  [[nodiscard]] std::string_view at(std::string_view key) const;  // throws MalformedTrace
  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& items() const { return items_; }
  [[nodiscard]] bool empty() const { return items_.empty(); }

  friend bool operator==(const Detail&, const Detail&) = default;

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

struct TraceEvent {
  std::uint64_t index = 0;
  EventKind kind = EventKind::region_created;
  std::optional<ProcessorId> processor;
  std::optional<RegionId> region;
  std::optional<Ticket> ticket;
  Detail detail;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

/// Totally ordered record of scheduler events; index is logical time.
class Trace {
 public:
  TraceEvent& append(EventKind kind, std::optional<ProcessorId> processor,
                     std::optional<RegionId> region, std::optional<Ticket> ticket, Detail detail);

  [[nodiscard]] const std::vector<TraceEvent>& events() const { return events_; }
  [[nodiscard]] std::size_t size() const { return events_.size(); }
  [[nodiscard]] bool empty() const { return events_.empty(); }
  [[nodiscard]] const TraceEvent& operator[](std::size_t i) const { return events_[i]; }

  /// Replace the event list, renumbering indices densely from zero.
  void assign(std::vector<TraceEvent> events);

  friend bool operator==(const Trace&, const Trace&) = default;

 private:
  std::vector<TraceEvent> events_;
};

/// One line: `index kind processor region ticket detail`, absent fields as
/// `-`, terminated by a newline.
std::string serialize(const TraceEvent& event);
std::string serialize(const Trace& trace);
void write_trace(std::ostream& os, const Trace& trace);

/// Throws Error(malformed_trace) on bad syntax, non-dense indices, or a
/// missing final newline.
Trace parse_trace(std::string_view text);
TraceEvent parse_event(std::string_view line);

/// Region list as written in details: `3,5,8`.
std::string format_regions(const std::set<RegionId>& regions);
std::set<RegionId> parse_regions(std::string_view text);

}  // namespace scoop
