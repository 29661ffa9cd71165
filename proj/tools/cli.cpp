#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "scoop/explore.hpp"
#include "scoop/scenarios.hpp"
#include "scoop/trace.hpp"
#include "scoop/verify.hpp"

namespace scoop::cli {
namespace {

struct ScenarioFlags {
  ScenarioConfig config;
  std::vector<std::pair<std::string, CLI::Option*>> params;
};

void add_scenario_flags(CLI::App& sub, ScenarioFlags& f) {
  sub.add_option("scenario", f.config.scenario, "philosophers | producer-consumer | hexapod | nested-query")
      ->required();
  auto param = [&](const char* name, std::int64_t& slot, const char* help) {
    f.params.emplace_back(name, sub.add_option(std::string("--") + name, slot, help));
  };
  param("n", f.config.n, "philosophers: number of philosophers and forks");
  param("rounds", f.config.rounds, "philosophers: meals per philosopher");
  param("capacity", f.config.capacity, "producer-consumer: buffer capacity");
  param("producers", f.config.producers, "producer-consumer: producer count");
  param("consumers", f.config.consumers, "producer-consumer: consumer count");
  param("items", f.config.items, "producer-consumer: items to transfer");
  param("steps", f.config.steps, "hexapod: gait cycles per leg group");
  sub.add_option("--step-budget", f.config.step_budget, "scheduler steps before giving up");
}

/// Builds the scenario, rejecting flags that belong to other scenarios.
Scenario resolve(const ScenarioFlags& f) {
  auto scenario = make_scenario(f.config);
  auto accepted = scenario_parameters(f.config.scenario);
  for (const auto& [name, opt] : f.params) {
    if (opt->count() > 0 && std::find(accepted.begin(), accepted.end(), name) == accepted.end()) {
      throw Error(ErrorCode::config_error, "--" + name + " does not apply to " + f.config.scenario);
    }
  }
  return scenario;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return buf.str();
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  return static_cast<bool>(out.flush());
}

std::string status_line(const ScheduleRun& run) {
  if (run.error) return "error " + std::string(to_string(run.error->code)) + " " + run.error->message;
  std::string s(to_string(run.result.status));
  if (!run.result.cycle.empty()) {
    s += " cycle=";
    for (std::size_t i = 0; i < run.result.cycle.size(); ++i) s += (i ? "," : "") + to_string(run.result.cycle[i]);
  }
  return s;
}

void print_run(std::ostream& out, const Scenario& scenario, const ScheduleRun& run) {
  out << "STATUS " << status_line(run) << '\n';
  out << "STEPS " << run.result.steps << '\n';
  for (const auto& [name, value] : scenario.stats(run.trace)) out << "STAT " << name << ' ' << value << '\n';
  for (const auto& v : run.verdicts) out << format_verdict(v) << '\n';
}

int outcome(const ScheduleRun& run) { return run.passed() ? kPass : kFail; }

int cmd_run(const ScenarioFlags& f, std::uint64_t seed, std::string trace_path, std::ostream& out,
            std::ostream& err) {
  auto scenario = resolve(f);
  auto run = run_seed(scenario.program, seed, f.config.step_budget);
  if (trace_path.empty()) trace_path = f.config.scenario + "-" + std::to_string(seed) + ".trace";
  if (!write_file(trace_path, serialize(run.trace))) {
    err << "cannot write " << trace_path << '\n';
    return kUsage;
  }
  out << "SEED " << seed << '\n';
  print_run(out, scenario, run);
  out << "TRACE " << trace_path << '\n';
  return outcome(run);
}

int cmd_verify(const std::string& path, std::ostream& out, std::ostream& err) {
  auto text = read_file(path);
  if (!text) {
    err << "cannot read " << path << '\n';
    return kUsage;
  }
  Trace trace = parse_trace(*text);
  const Report reports[] = {check_race_freedom(trace), check_order_and_sync(trace)};
  bool ok = true;
  for (const auto& r : reports) {
    out << format_verdict(to_verdict(r)) << '\n';
    for (const auto& v : r.violations) {
      out << "VIOLATION " << v.kind << ' ' << v.first << ' ' << v.second << ' ' << v.message << '\n';
    }
    ok = ok && r.passed();
  }
  return ok ? kPass : kFail;
}

int cmd_replay(const ScenarioFlags& f, const CLI::Option* seed_opt, std::uint64_t seed,
               const std::string& path_text, const std::string& expect, const std::string& trace_path,
               std::ostream& out, std::ostream& err) {
  auto scenario = resolve(f);
  ScheduleRun run;
  if (!path_text.empty()) {
    if (seed_opt->count() > 0) throw Error(ErrorCode::config_error, "give --seed or --path, not both");
    auto path = parse_path(path_text);
    if (!path) throw Error(ErrorCode::config_error, "bad schedule path '" + path_text + "'");
    run = run_path(scenario.program, *path, f.config.step_budget);
    out << "PATH " << format_path(*path) << '\n';
  } else {
    run = run_seed(scenario.program, seed, f.config.step_budget);
    out << "SEED " << seed << '\n';
  }
  print_run(out, scenario, run);
  const std::string produced = serialize(run.trace);
  if (!trace_path.empty() && !write_file(trace_path, produced)) {
    err << "cannot write " << trace_path << '\n';
    return kUsage;
  }
  int code = outcome(run);
  if (!expect.empty()) {
    auto wanted = read_file(expect);
    if (!wanted) {
      err << "cannot read " << expect << '\n';
      return kUsage;
    }
    const bool match = *wanted == produced;
    out << "REPLAY " << (match ? "match" : "mismatch") << '\n';
    if (!match) code = kFail;
  }
  return code;
}

std::string fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream s;
  s << std::hex << h;
  return s.str();
}

int cmd_explore(const ScenarioFlags& f, const CLI::Option* depth_opt, const CLI::Option* seeds_opt,
                ExploreBudget budget, std::ostream& out) {
  auto scenario = resolve(f);
  if (depth_opt->count() > 0 && seeds_opt->count() > 0) {
    throw Error(ErrorCode::config_error, "give --exhaustive-depth or --seeds, not both");
  }
  budget.mode = depth_opt->count() > 0 ? ExploreBudget::Mode::exhaustive : ExploreBudget::Mode::seeds;
  budget.step_budget = f.config.step_budget;
  if (budget.mode == ExploreBudget::Mode::exhaustive) {
    out << "MODE exhaustive depth=" << budget.depth << " max_schedules=" << budget.max_schedules << '\n';
  } else {
    out << "MODE seeds first=" << budget.first_seed << " count=" << budget.seeds << '\n';
  }
  auto report = explore_interleavings(scenario.program, budget);
  out << "SCHEDULES " << report.schedules << '\n';
  out << "COMPLETE " << (report.complete ? "yes" : "no") << '\n';
  out << "DEPTH_LIMITED " << (report.depth_limited ? "yes" : "no") << '\n';
  out << "DIGESTS " << report.digests.size() << '\n';
  out << "DEADLOCKS " << report.deadlocks << '\n';
  out << "FAILURES " << report.failures << '\n';
  for (const auto& d : report.digests) {
    out << "DIGEST " << d.status << ' ' << (d.verdicts.empty() ? "-" : d.verdicts) << " state=" << fnv1a(d.state)
        << '\n';
  }
  for (const auto& fail : report.first_failures) {
    out << "FAIL " << fail.replay << " status=" << fail.status;
    for (const auto& v : fail.failing) out << ' ' << v.name << ':' << v.detail;
    out << '\n';
  }
  return report.passed() ? kPass : kFail;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"SCOOP runtime: run scenarios, verify traces, explore interleavings", "scoop"};
  app.require_subcommand(1);

  ScenarioFlags run_flags;
  std::uint64_t run_seed_value = 0;
  std::string run_trace;
  auto* run_cmd = app.add_subcommand("run", "run a scenario once and write its trace");
  add_scenario_flags(*run_cmd, run_flags);
  run_cmd->add_option("--seed", run_seed_value, "scheduler seed");
  run_cmd->add_option("--trace", run_trace, "trace output path (default <scenario>-<seed>.trace)");

  std::string verify_path;
  auto* verify_cmd = app.add_subcommand("verify", "check a trace file");
  verify_cmd->add_option("trace", verify_path, "trace file")->required();

  ScenarioFlags replay_flags;
  std::uint64_t replay_seed = 0;
  std::string replay_path, replay_expect, replay_trace;
  auto* replay_cmd = app.add_subcommand("replay", "re-run one schedule, optionally comparing traces");
  add_scenario_flags(*replay_cmd, replay_flags);
  auto* replay_seed_opt = replay_cmd->add_option("--seed", replay_seed, "scheduler seed");
  replay_cmd->add_option("--path", replay_path, "choice path printed by explore, e.g. 0.1.0");
  replay_cmd->add_option("--expect", replay_expect, "trace file the replay must reproduce byte for byte");
  replay_cmd->add_option("--trace", replay_trace, "write the replayed trace here");

  ScenarioFlags explore_flags;
  ExploreBudget budget;
  auto* explore_cmd = app.add_subcommand("explore", "explore schedules of a scenario");
  add_scenario_flags(*explore_cmd, explore_flags);
  auto* depth_opt = explore_cmd->add_option("--exhaustive-depth", budget.depth,
                                            "enumerate every schedule, branching on the first N choice points");
  auto* seeds_opt = explore_cmd->add_option("--seeds", budget.seeds, "sample this many seeds");
  explore_cmd->add_option("--seed", budget.first_seed, "first seed in seeds mode");
  explore_cmd->add_option("--max-schedules", budget.max_schedules, "stop after this many schedules");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run_flags, run_seed_value, run_trace, out, err);
    if (*verify_cmd) return cmd_verify(verify_path, out, err);
    if (*replay_cmd) {
      return cmd_replay(replay_flags, replay_seed_opt, replay_seed, replay_path, replay_expect, replay_trace, out,
                        err);
    }
    if (*explore_cmd) return cmd_explore(explore_flags, depth_opt, seeds_opt, budget, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    if (e.code() == ErrorCode::config_error || e.code() == ErrorCode::malformed_trace) return kUsage;
    return kFail;
  }
  return kUsage;
}

}  // namespace scoop::cli
