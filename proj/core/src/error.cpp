#include "scoop/error.hpp"

#include <array>
#include <utility>

namespace scoop {
namespace {

constexpr std::array<std::pair<ErrorCode, std::string_view>, 15> kNames{{
    {ErrorCode::unknown_region, "UnknownRegion"},
    {ErrorCode::unknown_target, "UnknownTarget"},
    {ErrorCode::unknown_routine, "UnknownRoutine"},
    {ErrorCode::bad_call, "BadCall"},
    {ErrorCode::ownership_violation, "OwnershipViolation"},
    {ErrorCode::illegal_dereference, "IllegalDereference"},
    {ErrorCode::poisoned_region, "PoisonedRegion"},
    {ErrorCode::contract_violation, "ContractViolation"},
    {ErrorCode::malformed_predicate, "MalformedPredicate"},
    {ErrorCode::body_exception, "BodyException"},
    {ErrorCode::deadlock_detected, "DeadlockDetected"},
    {ErrorCode::stalled, "Stalled"},
    {ErrorCode::step_budget_exceeded, "StepBudgetExceeded"},
    {ErrorCode::malformed_trace, "MalformedTrace"},
    {ErrorCode::config_error, "ConfigError"},
}};

std::string compose(const Exception& e) {
  std::string text{to_string(e.code)};
  if (!e.message.empty()) {
    text += ": ";
    text += e.message;
  }
  return text;
}

}  // namespace

std::string_view to_string(ErrorCode code) {
  for (const auto& [c, name] : kNames) {
    if (c == code) return name;
  }
  return "Unknown";
}

bool parse_error_code(std::string_view text, ErrorCode& out) {
  for (const auto& [c, name] : kNames) {
    if (name == text) {
      out = c;
      return true;
    }
  }
  return false;
}

Error::Error(ErrorCode code, const std::string& message)
    : Error(Exception{code, message}) {}

Error::Error(Exception payload)
    : std::runtime_error(compose(payload)), payload_(std::move(payload)) {}

}  // namespace scoop
