#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scoop/trace.hpp"

namespace scoop {

/// One offending spot in a trace: the two event indices that conflict.
struct Violation {
  std::string kind;
  std::uint64_t first = 0;
  std::uint64_t second = 0;
  std::string message;
};

struct Report {
  std::string name;
  std::vector<Violation> violations;

  [[nodiscard]] bool passed() const { return violations.empty(); }
  [[nodiscard]] bool has(std::string_view kind) const;
};

struct Verdict {
  std::string name;
  bool pass = true;
  std::string detail;
};

Verdict to_verdict(const Report& report);
/// `VERDICT name pass|fail detail`
std::string format_verdict(const Verdict& v);

/// Region exclusivity and reservation atomicity. Violations:
///   interval_overlap     two processors' applications on one region overlap,
///                        or a region is acquired while another processor holds it
///   partial_reservation  an application starts without holding its whole set
/// Throws Error(malformed_trace) if an application never terminates.
Report check_race_freedom(const Trace& trace);

/// Violations:
///   per_caller_order  applications of one (caller, region) pair out of logging order
///   query_silence     the caller acted between QUERY_ISSUED and its QUERY_RESULT
/// Throws Error(malformed_trace) if a query never gets a result.
Report check_order_and_sync(const Trace& trace);

/// Every start that had its wait condition checked is immediately preceded
/// by a true check of the same ticket. Violation: unchecked_start.
Report check_wait_soundness(const Trace& trace);

enum class Mutation { interval_overlap, per_caller_reorder, query_silence_break, partial_reservation };

inline constexpr Mutation kMutations[] = {Mutation::interval_overlap, Mutation::per_caller_reorder,
                                          Mutation::query_silence_break,
                                          Mutation::partial_reservation};

std::string_view to_string(Mutation m);
std::optional<Mutation> parse_mutation(std::string_view text);
/// Violation kind a checker must report for the mutated trace.
std::string_view expected_violation(Mutation m);

/// Injects one violation; nullopt when the trace has no suitable site
/// (e.g. no query to break silence in).
std::optional<Trace> mutate(const Trace& trace, Mutation m);

}  // namespace scoop
