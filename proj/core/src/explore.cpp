#include "scoop/explore.hpp"

#include <charconv>

namespace scoop {

std::size_t ScriptedChooser::choose(std::span<const Transition> enabled) {
  const std::size_t at = taken_.size();
  std::size_t pick = at < prefix_.size() ? prefix_[at] : 0;
  if (pick >= enabled.size()) pick = enabled.size() - 1;
  if (at >= branch_limit_) truncated_ = true;
  taken_.push_back(pick);
  widths_.push_back(enabled.size());
  return pick;
}

std::string format_path(const std::vector<std::size_t>& path) {
  std::string out;
  for (auto c : path) {
    if (!out.empty()) out += '.';
    out += std::to_string(c);
  }
  return out.empty() ? "-" : out;
}

std::optional<std::vector<std::size_t>> parse_path(std::string_view text) {
  std::vector<std::size_t> out;
  if (text == "-" || text.empty()) return out;
  while (true) {
    auto dot = text.find('.');
    auto part = text.substr(0, dot);
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || p != part.data() + part.size() || part.empty()) return std::nullopt;
    out.push_back(v);
    if (dot == std::string_view::npos) break;
    text.remove_prefix(dot + 1);
  }
  return out;
}

std::string to_string(const OutcomeDigest& d) { return d.status + "|" + d.verdicts + "|" + d.state; }

bool ScheduleRun::passed() const {
  if (error) return false;
  for (const auto& v : verdicts) {
    if (!v.pass) return false;
  }
  return true;
}

ScheduleRun run_schedule(const Program& program, std::unique_ptr<Chooser> chooser,
                         RuntimeOptions options) {
  ScheduleRun out;
  auto* scripted = dynamic_cast<ScriptedChooser*>(chooser.get());
  Runtime rt(options);
  rt.set_chooser(std::move(chooser));
  try {
    program.install(rt);
    out.result = rt.run_until_quiescent();
    out.verdicts = program.analyze(rt, out.result);
  } catch (const Error& e) {
    out.error = e.payload();
  }
  out.trace = rt.trace();
  if (scripted != nullptr) {
    out.path = scripted->taken();
    out.widths = scripted->widths();
    out.truncated = scripted->truncated();
  }
  out.digest.status = out.error ? "error:" + std::string(to_string(out.error->code))
                                : std::string(to_string(out.result.status));
  out.digest.state = rt.state_digest();
  for (const auto& v : out.verdicts) {
    if (!out.digest.verdicts.empty()) out.digest.verdicts += ',';
    out.digest.verdicts += v.name + (v.pass ? "=pass" : "=fail");
  }
  return out;
}

ScheduleRun run_seed(const Program& program, std::uint64_t seed, std::uint64_t step_budget) {
  return run_schedule(program, std::make_unique<SeededChooser>(seed), RuntimeOptions{seed, step_budget});
}

ScheduleRun run_path(const Program& program, const std::vector<std::size_t>& path,
                     std::uint64_t step_budget) {
  return run_schedule(program, std::make_unique<ScriptedChooser>(path), RuntimeOptions{0, step_budget});
}

namespace {

constexpr std::size_t kKeptFailures = 5;

void record(ExploreReport& report, const ScheduleRun& run, std::string replay) {
  ++report.schedules;
  report.digests.insert(run.digest);
  if (!run.error && run.result.status == RunStatus::deadlock) ++report.deadlocks;
  if (!run.error && run.result.status == RunStatus::budget_exceeded) ++report.budget_exceeded;
  if (run.passed()) return;
  ++report.failures;
  if (report.first_failures.size() >= kKeptFailures) return;
  FailedSchedule f{std::move(replay), run.digest.status, {}};
  for (const auto& v : run.verdicts) {
    if (!v.pass) f.failing.push_back(v);
  }
  report.first_failures.push_back(std::move(f));
}

}  // namespace

ExploreReport explore_interleavings(const Program& program, const ExploreBudget& budget) {
  ExploreReport report;
  if (budget.mode == ExploreBudget::Mode::seeds) {
    for (std::uint64_t i = 0; i < budget.seeds; ++i) {
      const std::uint64_t seed = budget.first_seed + i;
      record(report, run_seed(program, seed, budget.step_budget), "--seed " + std::to_string(seed));
    }
    return report;
  }

  std::vector<std::size_t> prefix;
  while (true) {
    if (report.schedules >= budget.max_schedules) {
      report.complete = false;
      break;
    }
    auto run = run_schedule(program, std::make_unique<ScriptedChooser>(prefix, budget.depth),
                            RuntimeOptions{0, budget.step_budget});
    report.depth_limited = report.depth_limited || run.truncated;
    record(report, run, "--path " + format_path(run.path));

    // Next sibling of the deepest choice point that still has one, within
    // the branching depth.
    std::size_t k = std::min<std::size_t>(run.path.size(), budget.depth);
    while (k > 0 && run.path[k - 1] + 1 >= run.widths[k - 1]) --k;
    if (k == 0) break;
    prefix.assign(run.path.begin(), run.path.begin() + static_cast<std::ptrdiff_t>(k));
    ++prefix.back();
  }
  return report;
}

}  // namespace scoop
