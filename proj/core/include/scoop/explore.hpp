#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "scoop/runtime.hpp"
#include "scoop/verify.hpp"

namespace scoop {

/// A runnable program: `install` populates a fresh runtime (host-level calls
/// only), `analyze` judges the finished run.
struct Program {
  std::function<void(Runtime&)> install;
  std::function<std::vector<Verdict>(const Runtime&, const RunResult&)> analyze;
};

/// Replays a fixed list of choices, then always takes the first enabled
/// transition. Records the width of every choice point it sees.
class ScriptedChooser final : public Chooser {
 public:
  explicit ScriptedChooser(std::vector<std::size_t> prefix, std::uint64_t branch_limit = UINT64_MAX)
      : prefix_(std::move(prefix)), branch_limit_(branch_limit) {}

  std::size_t choose(std::span<const Transition> enabled) override;

  [[nodiscard]] const std::vector<std::size_t>& taken() const { return taken_; }
  [[nodiscard]] const std::vector<std::size_t>& widths() const { return widths_; }
  /// True if a choice point past the branch limit had more than one option.
  [[nodiscard]] bool truncated() const { return truncated_; }

 private:
  std::vector<std::size_t> prefix_;
  std::uint64_t branch_limit_;
  std::vector<std::size_t> taken_;
  std::vector<std::size_t> widths_;
  bool truncated_ = false;
};

/// `2.0.1` style rendering of a choice path, and its inverse.
std::string format_path(const std::vector<std::size_t>& path);
std::optional<std::vector<std::size_t>> parse_path(std::string_view text);

/// Final object states plus the verdict flags of one run.
struct OutcomeDigest {
  std::string status;
  std::string state;
  std::string verdicts;  // "name=pass,name=fail"

  auto operator<=>(const OutcomeDigest&) const = default;
};

std::string to_string(const OutcomeDigest& d);

struct ScheduleRun {
  RunResult result;
  std::vector<Verdict> verdicts;
  OutcomeDigest digest;
  Trace trace;
  std::optional<Exception> error;  // install failed
  std::vector<std::size_t> path;   // choices taken, for replay
  std::vector<std::size_t> widths;
  bool truncated = false;

  [[nodiscard]] bool passed() const;
};

/// One run of `program`, scheduled by `chooser`.
ScheduleRun run_schedule(const Program& program, std::unique_ptr<Chooser> chooser,
                         RuntimeOptions options);
ScheduleRun run_seed(const Program& program, std::uint64_t seed, std::uint64_t step_budget);
ScheduleRun run_path(const Program& program, const std::vector<std::size_t>& path,
                     std::uint64_t step_budget);

struct ExploreBudget {
  enum class Mode { exhaustive, seeds };
  Mode mode = Mode::seeds;
  std::uint64_t depth = 64;          // exhaustive: choice points branched on
  std::uint64_t seeds = 1;           // seeds mode: how many
  std::uint64_t first_seed = 0;
  std::uint64_t max_schedules = 100'000;
  std::uint64_t step_budget = 1'000'000;
};

struct FailedSchedule {
  std::string replay;  // "--seed N" or "--path P"
  std::string status;
  std::vector<Verdict> failing;
};

struct ExploreReport {
  std::uint64_t schedules = 0;
  std::uint64_t failures = 0;
  std::uint64_t deadlocks = 0;
  std::uint64_t budget_exceeded = 0;
  bool complete = true;        // whole tree visited (exhaustive mode)
  bool depth_limited = false;  // some choice point past the depth was not branched
  std::set<OutcomeDigest> digests;
  std::vector<FailedSchedule> first_failures;  // at most a few, in visit order

  [[nodiscard]] bool passed() const { return failures == 0; }
};

/// Exhaustive mode: stateless depth-first search over choice points by
/// replaying prefixes. Seeds mode: seeds first_seed, first_seed + 1, ...
ExploreReport explore_interleavings(const Program& program, const ExploreBudget& budget);

}  // namespace scoop
