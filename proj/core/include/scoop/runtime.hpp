#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scoop/contracts.hpp"
#include "scoop/ids.hpp"
#include "scoop/model.hpp"
#include "scoop/task.hpp"
#include "scoop/trace.hpp"
#include "scoop/value.hpp"
#include "scoop/wait_graph.hpp"

namespace scoop {

class CallContext;

/// Routine body. Runs on the executing processor with the call's regions
/// reserved; may suspend only while waiting for a separate query.
using Body = std::function<Task(CallContext&)>;

struct Routine {
  std::string name;
  CallKind kind = CallKind::command;
  std::vector<std::string> formals;
  Contract contract;
  Body body;
};

class RoutineTable {
 public:
  explicit RoutineTable(std::string name = {}) : name_(std::move(name)) {}

  RoutineTable& add(Routine routine);
  [[nodiscard]] const Routine* find(std::string_view name) const;
  [[nodiscard]] const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::map<std::string, Routine, std::less<>> routines_;
};

/// What a caller asks for; the runtime resolves it into a CallSpec.
struct CallRequest {
  SeparateRef target;
  std::string routine;
  std::vector<Value> args;
};

struct CallSpec {
  ProcessorId caller;
  SeparateRef target;
  std::string routine;
  std::vector<Value> args;
  CallKind kind = CallKind::command;
  std::string contract;
  Ticket ticket;
};

/// The atomic region set a logged call must hold before it is applied:
/// executor's home, target region and the region of every reference
/// argument, duplicates collapsed.
struct ReservationRequest {
  Ticket ticket;
  ProcessorId requester;
  std::set<RegionId> regions;
  bool trivial_wait = true;
};

enum class GrantOutcome { granted, queued, failed };
enum class ApplyOutcome { completed, failed, suspended };

enum class TransitionKind { grant, run, deliver };

struct Transition {
  TransitionKind kind = TransitionKind::run;
  ProcessorId processor;  // executor for grant/run, caller for deliver
  Ticket ticket;          // unused for run

  friend bool operator==(const Transition&, const Transition&) = default;
};

std::string to_string(const Transition& t);

/// Picks one of several enabled transitions. Only consulted when more than
/// one transition is enabled.
class Chooser {
 public:
  virtual ~Chooser() = default;
  virtual std::size_t choose(std::span<const Transition> enabled) = 0;
};

class SeededChooser final : public Chooser {
 public:
  explicit SeededChooser(std::uint64_t seed) : engine_(seed) {}
  std::size_t choose(std::span<const Transition> enabled) override {
    return static_cast<std::size_t>(engine_() % enabled.size());
  }

 private:
  std::mt19937_64 engine_;
};

enum class RunStatus { quiescent, deadlock, stalled, budget_exceeded };
std::string_view to_string(RunStatus status);

struct RunResult {
  RunStatus status = RunStatus::quiescent;
  std::uint64_t steps = 0;
  std::vector<ProcessorId> cycle;  // set when status == deadlock
};

struct RuntimeOptions {
  std::uint64_t seed = 0;
  std::uint64_t step_budget = 1'000'000;
};

/// Virtual-mode SCOOP runtime. The host program acts as the root processor;
/// everything else advances one scheduler transition at a time, chosen by
/// the installed Chooser.
class Runtime {
 public:
  explicit Runtime(RuntimeOptions options = {});
  ~Runtime();
  Runtime(const Runtime&) = delete;
  Runtime& operator=(const Runtime&) = delete;

  [[nodiscard]] ProcessorId root() const;
  [[nodiscard]] RegionId root_region() const;

  RegionId create_region(RegionKind kind) { return create_region(root(), kind); }
  RegionId create_region(ProcessorId acting, RegionKind kind);
  SeparateRef create_object(RegionId region, ObjectState initial) {
    return create_object(root(), region, std::move(initial));
  }
  SeparateRef create_object(ProcessorId acting, RegionId region, ObjectState initial);
  [[nodiscard]] bool is_separate(ProcessorId acting, SeparateRef ref) const;

  /// Logs a command; applies it in place when the target is in the caller's
  /// own region and no argument is separate.
  Ticket log_command(ProcessorId caller, CallRequest call);
  /// Issues a query and drives the scheduler until the reply is delivered.
  Value call_query(ProcessorId caller, CallRequest call);

  /// Atomic all-or-none acquisition of the request's regions plus wait
  /// condition evaluation; starts the application when granted.
  GrantOutcome acquire_and_check(Ticket ticket);
  /// Starts or continues the innermost application of `executor`.
  ApplyOutcome apply_call(ProcessorId executor);
  /// Emits QUERY_RESULT for a finished query and unblocks its caller.
  void deliver(Ticket ticket);
  void propagate_async_exception(RegionId region, Exception e);

  [[nodiscard]] std::vector<Transition> enabled_transitions() const;
  void set_chooser(std::unique_ptr<Chooser> chooser);
  /// Executes one chosen transition; false when none is enabled.
  bool step();
  RunResult run_until_quiescent();

  [[nodiscard]] const Trace& trace() const;
  [[nodiscard]] const Region& region(RegionId id) const;
  [[nodiscard]] Processor processor(ProcessorId id) const;
  [[nodiscard]] std::vector<RegionId> regions() const;
  [[nodiscard]] std::vector<ProcessorId> processors() const;
  [[nodiscard]] std::optional<ReservationRequest> pending(Ticket ticket) const;
  [[nodiscard]] const ObjectState& inspect(SeparateRef ref) const;
  [[nodiscard]] WaitForGraph wait_for_graph() const;
  [[nodiscard]] bool has_work() const;
  [[nodiscard]] std::uint64_t steps() const;
  /// Canonical rendering of every object's final state, in id order.
  [[nodiscard]] std::string state_digest() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

/// The restricted view of the runtime handed to a routine body.
class CallContext {
 public:
  CallContext(Runtime::Impl& rt, ProcessorId processor, SeparateRef current,
              std::vector<Value> args, const Routine& routine);

  [[nodiscard]] ProcessorId processor() const { return processor_; }
  [[nodiscard]] SeparateRef current() const { return current_; }
  [[nodiscard]] const std::vector<Value>& args() const { return args_; }
  [[nodiscard]] const Value& arg(std::size_t i) const;
  [[nodiscard]] const Value& arg(std::string_view formal) const;

  ObjectState& self() { return deref(current_); }
  /// Legal only for the home region or a region held by this processor;
  /// throws Error(illegal_dereference) otherwise.
  ObjectState& deref(const SeparateRef& ref);
  [[nodiscard]] bool is_separate(const SeparateRef& ref) const;

  /// The one way a body calls anything: sequential in place, logged
  /// asynchronously, or a blocking query, depending on separateness.
  Task call(SeparateRef target, std::string routine, std::vector<Value> args = {});

  RegionId create_region(RegionKind kind);
  SeparateRef create_object(RegionId region, ObjectState initial);

 private:
  Runtime::Impl* rt_;
  ProcessorId processor_;
  SeparateRef current_;
  std::vector<Value> args_;
  const Routine* routine_;
};

}  // namespace scoop
