#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scoop {

enum class ErrorCode {
  unknown_region,
  unknown_target,
  unknown_routine,
  bad_call,
  ownership_violation,
  illegal_dereference,
  poisoned_region,
  contract_violation,
  malformed_predicate,
  body_exception,
  deadlock_detected,
  stalled,
  step_budget_exceeded,
  malformed_trace,
  config_error,
};

/// Stable spelling used in trace details and reports.
std::string_view to_string(ErrorCode code);
bool parse_error_code(std::string_view text, ErrorCode& out);

/// An exception value as carried through the runtime: stored in poisoned
/// regions, delivered as query replies, serialized into EXCEPTION events.
struct Exception {
  ErrorCode code = ErrorCode::body_exception;
  std::string message;

  friend bool operator==(const Exception&, const Exception&) = default;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  explicit Error(Exception payload);

  [[nodiscard]] ErrorCode code() const { return payload_.code; }
  [[nodiscard]] const Exception& payload() const { return payload_; }

 private:
  Exception payload_;
};

}  // namespace scoop
