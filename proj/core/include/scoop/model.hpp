#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "scoop/ids.hpp"
#include "scoop/value.hpp"

namespace scoop {

enum class RegionKind { active, passive };
enum class CallKind { command, query };

std::string_view to_string(RegionKind kind);
std::string_view to_string(CallKind kind);

class RoutineTable;

/// The state of one object: a closed store of named values plus the table of
/// routines that may be invoked on it.
class ObjectState {
 public:
  ObjectState() = default;
  explicit ObjectState(std::shared_ptr<const RoutineTable> routines)
      : routines_(std::move(routines)) {}

  [[nodiscard]] const Value& get(std::string_view field) const;
  [[nodiscard]] std::int64_t integer(std::string_view field) const { return get(field).as_integer(); }
  [[nodiscard]] bool boolean(std::string_view field) const { return get(field).as_boolean(); }
  [[nodiscard]] SeparateRef ref(std::string_view field) const { return get(field).as_ref(); }
  [[nodiscard]] bool has(std::string_view field) const;

  ObjectState& set(std::string field, Value v);

  [[nodiscard]] const std::map<std::string, Value, std::less<>>& fields() const { return fields_; }
  [[nodiscard]] const std::shared_ptr<const RoutineTable>& routines() const { return routines_; }

  // Values only; routine tables are shared, not compared.
  friend bool operator==(const ObjectState& a, const ObjectState& b) { return a.fields_ == b.fields_; }

 private:
  std::map<std::string, Value, std::less<>> fields_;
  std::shared_ptr<const RoutineTable> routines_;
};

/// Canonical `name=value;...` rendering used in outcome digests.
std::string to_string(const ObjectState& state);

struct Region {
  RegionId id;
  RegionKind kind = RegionKind::active;
  std::optional<ProcessorId> processor;  // present iff active
  ProcessorId creator;
  std::set<ObjectId> objects;
  std::optional<ProcessorId> holder;
  std::set<Ticket> wait_queue;
  std::optional<Exception> poisoned;
  // Bumped whenever state in the region may have changed; stale wait
  // conditions are only retried after a bump.
  std::uint64_t version = 0;
};

enum class ProcessorStatus { idle, executing, blocked };

struct Processor {
  ProcessorId id;
  RegionId home;
  std::deque<Ticket> request_queue;  // logged, not yet granted, in logging order
  ProcessorStatus status = ProcessorStatus::idle;
  std::optional<Ticket> executing;   // innermost application in progress
  std::optional<Ticket> blocked_on;  // query this processor waits for
};

}  // namespace scoop
