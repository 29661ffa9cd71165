#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scoop/explore.hpp"
#include "scoop/runtime.hpp"
#include "scoop/trace.hpp"
#include "scoop/verify.hpp"

namespace scoop {

/// Parameters of every scenario; each scenario reads only its own.
struct ScenarioConfig {
  std::string scenario;
  std::int64_t n = 5;
  std::int64_t rounds = 10;
  std::int64_t capacity = 1;
  std::int64_t producers = 1;
  std::int64_t consumers = 1;
  std::int64_t items = 100;
  std::int64_t steps = 50;
  std::uint64_t seed = 0;
  std::uint64_t step_budget = 1'000'000;
};

using Stat = std::pair<std::string, std::string>;

struct ScenarioResult {
  Trace trace;
  RunResult run;
  std::vector<Stat> stats;
  std::vector<Verdict> verdicts;

  [[nodiscard]] bool passed() const;
};

struct Scenario {
  Program program;
  /// Statistics recomputed from the trace alone.
  std::vector<Stat> (*stats)(const Trace&) = nullptr;
};

/// philosophers, producer-consumer, hexapod, nested-query
std::span<const std::string_view> scenario_names();
/// Names of the parameters a scenario accepts (as CLI flags, without dashes).
std::span<const std::string_view> scenario_parameters(std::string_view scenario);

/// Throws Error(config_error) for an unknown scenario or bad parameters.
Scenario make_scenario(const ScenarioConfig& config);
ScenarioResult run_scenario(const ScenarioConfig& config);

/// Trace-derived observations shared by the verdicts and the tests' oracles.
namespace observe {

/// Routine and arguments of each started application, by ticket.
struct Application {
  Ticket ticket;
  ProcessorId executor;
  std::string routine;
  std::vector<Value> args;
  std::uint64_t started = 0;
  std::uint64_t ended = 0;  // index of COMPLETED or terminal EXCEPTION
  bool completed = false;
  std::optional<Value> result;
};

std::vector<Application> applications(const Trace& trace);
std::vector<Value> parse_args(std::string_view text);

}  // namespace observe

}  // namespace scoop
