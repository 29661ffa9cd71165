#include "scoop/scenarios.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <set>

namespace scoop {
namespace observe {

std::vector<Value> parse_args(std::string_view text) {
  std::vector<Value> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto part = text.substr(0, comma);
    auto v = parse_value(part);
    if (!v) throw Error(ErrorCode::malformed_trace, "bad argument '" + std::string(part) + "'");
    out.push_back(std::move(*v));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<Application> applications(const Trace& trace) {
  std::vector<Application> out;
  std::map<Ticket, std::size_t> open;
  for (const auto& e : trace.events()) {
    if (e.kind == EventKind::application_started && e.ticket && e.processor) {
      Application app;
      app.ticket = *e.ticket;
      app.executor = *e.processor;
      app.routine = std::string(e.detail.at("routine"));
      if (auto a = e.detail.find("args")) app.args = parse_args(*a);
      app.started = e.index;
      open[app.ticket] = out.size();
      out.push_back(std::move(app));
    } else if ((e.kind == EventKind::application_completed || e.kind == EventKind::exception) && e.ticket) {
      auto it = open.find(*e.ticket);
      if (it == open.end()) continue;
      auto& app = out[it->second];
      app.ended = e.index;
      app.completed = e.kind == EventKind::application_completed;
      if (auto r = e.detail.find("result")) app.result = parse_value(*r);
      open.erase(it);
    }
  }
  return out;
}

}  // namespace observe

bool ScenarioResult::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

namespace {

constexpr std::array<std::string_view, 4> kNames{"philosophers", "producer-consumer", "hexapod",
                                                 "nested-query"};
constexpr std::array<std::string_view, 2> kPhilosopherParams{"n", "rounds"};
constexpr std::array<std::string_view, 4> kBufferParams{"capacity", "producers", "consumers", "items"};
constexpr std::array<std::string_view, 1> kGaitParams{"steps"};

[[noreturn]] void config_error(const std::string& message) { throw Error(ErrorCode::config_error, message); }

void require_at_least(std::string_view name, std::int64_t value, std::int64_t low) {
  if (value < low) {
    config_error(std::string(name) + " must be at least " + std::to_string(low) + ", got " +
                 std::to_string(value));
  }
}

Routine make_routine(std::string name, CallKind kind, std::vector<std::string> formals, Body body,
                     Contract contract = {}) {
  if (contract.id.empty()) contract.id = name;
  return Routine{std::move(name), kind, std::move(formals), std::move(contract), std::move(body)};
}

Verdict make_verdict(std::string name, bool pass, std::string detail = "-") {
  return Verdict{std::move(name), pass, std::move(detail)};
}

std::vector<Verdict> common_verdicts(const Trace& trace, const RunResult& result) {
  std::vector<Verdict> out;
  for (auto check : {&check_race_freedom, &check_order_and_sync}) {
    try {
      out.push_back(to_verdict(check(trace)));
    } catch (const Error& e) {
      out.push_back(make_verdict(check == &check_race_freedom ? "race_freedom" : "order_and_sync", false,
                                 "malformed " + std::string(e.what())));
    }
  }
  std::string detail = "status=" + std::string(to_string(result.status));
  if (!result.cycle.empty()) {
    detail += " cycle=";
    for (std::size_t i = 0; i < result.cycle.size(); ++i) {
      detail += (i ? "," : "") + to_string(result.cycle[i]);
    }
  }
  out.push_back(make_verdict("termination", result.status == RunStatus::quiescent, detail));
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : ",") + p;
  return out.empty() ? "-" : out;
}

// -- dining philosophers ------------------------------------------------------

Task dine(CallContext& ctx) {
  const auto rounds = ctx.self().integer("rounds");
  const auto left = ctx.self().ref("left");
  const auto right = ctx.self().ref("right");
  for (std::int64_t i = 0; i < rounds; ++i) {
    std::vector<Value> args{left, right};
    co_await ctx.call(ctx.current(), "eat", std::move(args));
  }
  co_return Value{};
}

Task eat(CallContext& ctx) {
  const auto left = ctx.arg("left").as_ref();
  const auto right = ctx.arg("right").as_ref();
  auto& l = ctx.deref(left);
  l.set("uses", l.integer("uses") + 1);
  if (right != left) {
    auto& r = ctx.deref(right);
    r.set("uses", r.integer("uses") + 1);
  }
  auto& self = ctx.self();
  self.set("meals", self.integer("meals") + 1);
  co_return Value{};
}

std::shared_ptr<const RoutineTable> philosopher_table() {
  static const auto table = [] {
    auto t = std::make_shared<RoutineTable>("philosopher");
    t->add(make_routine("dine", CallKind::command, {}, dine));
    Contract c{"eat", {}, {PostClause{"meals = old meals + 1", [](const PostconditionEnv& env) {
                                        return env.current().integer("meals") ==
                                               env.old_current().integer("meals") + 1;
                                      }}}};
    t->add(make_routine("eat", CallKind::command, {"left", "right"}, eat, std::move(c)));
    return t;
  }();
  return table;
}

std::map<ProcessorId, std::int64_t> meals_by_philosopher(const Trace& trace) {
  std::map<ProcessorId, std::int64_t> meals;
  for (const auto& app : observe::applications(trace)) {
    if (app.routine == "dine") meals.try_emplace(app.executor, 0);
    if (app.routine == "eat" && app.completed) ++meals[app.executor];
  }
  return meals;
}

std::vector<Stat> philosopher_stats(const Trace& trace) {
  std::vector<std::string> parts;
  for (const auto& [p, m] : meals_by_philosopher(trace)) parts.push_back(std::to_string(m));
  return {{"meals", join(parts)}};
}

Scenario philosophers(const ScenarioConfig& cfg) {
  require_at_least("n", cfg.n, 1);
  require_at_least("rounds", cfg.rounds, 0);
  auto diners = std::make_shared<std::vector<SeparateRef>>();
  Program program;
  program.install = [n = cfg.n, rounds = cfg.rounds, diners](Runtime& rt) {
    diners->clear();
    auto fork_table = std::make_shared<RoutineTable>("fork");
    std::vector<SeparateRef> forks;
    for (std::int64_t i = 0; i < n; ++i) {
      auto r = rt.create_region(RegionKind::passive);
      forks.push_back(rt.create_object(r, ObjectState(fork_table).set("uses", 0)));
    }
    for (std::int64_t i = 0; i < n; ++i) {
      auto r = rt.create_region(RegionKind::active);
      auto state = ObjectState(philosopher_table());
      state.set("meals", 0).set("rounds", rounds).set("left", forks[i]).set("right", forks[(i + 1) % n]);
      diners->push_back(rt.create_object(r, std::move(state)));
    }
    for (auto d : *diners) rt.log_command(rt.root(), CallRequest{d, "dine", {}});
  };
  program.analyze = [n = cfg.n, rounds = cfg.rounds, diners](const Runtime& rt, const RunResult& result) {
    auto out = common_verdicts(rt.trace(), result);
    auto meals = meals_by_philosopher(rt.trace());
    bool ok = static_cast<std::int64_t>(meals.size()) == n;
    std::string detail = "-";
    for (const auto& [p, m] : meals) {
      if (m != rounds && ok) detail = "processor=" + to_string(p) + " meals=" + std::to_string(m);
      ok = ok && m == rounds;
    }
    for (auto d : *diners) {
      const auto m = rt.inspect(d).integer("meals");
      if (m != rounds && ok) detail = "object=" + to_string(d.object) + " meals=" + std::to_string(m);
      ok = ok && m == rounds;
    }
    out.push_back(make_verdict("meals", ok, detail));
    return out;
  };
  return Scenario{std::move(program), philosopher_stats};
}

// -- producer / consumer -------------------------------------------------------

std::string slot(std::int64_t i) { return "slot_" + std::to_string(i); }

Task buffer_capacity(CallContext& ctx) { co_return ctx.self().get("capacity"); }

Task produce(CallContext& ctx) {
  const auto b = ctx.self().ref("buffer");
  // Learn the buffer size first; the items themselves go out asynchronously.
  const auto capacity = co_await ctx.call(b, "capacity");
  ctx.self().set("seen_capacity", capacity);
  const auto items = ctx.self().integer("items");
  const auto stride = ctx.self().integer("stride");
  for (auto i = ctx.self().integer("first"); i < items; i += stride) {
    std::vector<Value> args{b, i};
    co_await ctx.call(ctx.current(), "put", std::move(args));
  }
  co_return Value{};
}

Task put(CallContext& ctx) {
  auto& buf = ctx.deref(ctx.arg("b").as_ref());
  const auto cap = buf.integer("capacity");
  const auto count = buf.integer("count");
  buf.set(slot((buf.integer("head") + count) % cap), ctx.arg("v"));
  buf.set("count", count + 1);
  auto& self = ctx.self();
  self.set("produced", self.integer("produced") + 1);
  co_return Value{};
}

Task consume(CallContext& ctx) {
  const auto b = ctx.self().ref("buffer");
  const auto quota = ctx.self().integer("quota");
  for (std::int64_t i = 0; i < quota; ++i) {
    std::vector<Value> args{b};
    co_await ctx.call(ctx.current(), "take", std::move(args));
  }
  co_return Value{};
}

Task take(CallContext& ctx) {
  auto& buf = ctx.deref(ctx.arg("b").as_ref());
  const auto head = buf.integer("head");
  Value item = buf.get(slot(head));
  buf.set("head", (head + 1) % buf.integer("capacity"));
  buf.set("count", buf.integer("count") - 1);
  auto& self = ctx.self();
  self.set("consumed", self.integer("consumed") + 1);
  co_return item;
}

Clause buffer_clause(std::string name, bool (*holds)(const ObjectState&)) {
  return Clause{std::move(name), {"b"}, [holds](const ClauseEnv& env) { return holds(env.separate("b")); }};
}

PostClause count_moves_by(std::string name, std::int64_t delta) {
  return PostClause{std::move(name), [delta](const PostconditionEnv& env) {
                      return env.separate("b").integer("count") == env.old("b").integer("count") + delta;
                    }};
}

std::shared_ptr<const RoutineTable> buffer_table() {
  static const auto table = [] {
    auto t = std::make_shared<RoutineTable>("buffer");
    t->add(make_routine("capacity", CallKind::query, {}, buffer_capacity));
    return t;
  }();
  return table;
}

std::shared_ptr<const RoutineTable> producer_table() {
  static const auto table = [] {
    auto t = std::make_shared<RoutineTable>("producer");
    t->add(make_routine("run", CallKind::command, {}, produce));
    Contract c{"put",
               {buffer_clause("not b.is_full",
                              [](const ObjectState& b) { return b.integer("count") < b.integer("capacity"); })},
               {count_moves_by("b.count = old b.count + 1", 1)}};
    t->add(make_routine("put", CallKind::command, {"b", "v"}, put, std::move(c)));
    return t;
  }();
  return table;
}

std::shared_ptr<const RoutineTable> consumer_table() {
  static const auto table = [] {
    auto t = std::make_shared<RoutineTable>("consumer");
    t->add(make_routine("run", CallKind::command, {}, consume));
    Contract c{"take",
               {buffer_clause("not b.is_empty", [](const ObjectState& b) { return b.integer("count") > 0; })},
               {count_moves_by("b.count = old b.count - 1", -1)}};
    t->add(make_routine("take", CallKind::command, {"b"}, take, std::move(c)));
    return t;
  }();
  return table;
}

struct BufferFlow {
  std::vector<Value> produced;  // put arguments in application order
  std::vector<Value> consumed;  // take results in application order
  std::int64_t max_occupancy = 0;
  std::optional<std::string> bound_violation;
};

BufferFlow buffer_flow(const Trace& trace, std::int64_t capacity) {
  BufferFlow flow;
  std::int64_t occupancy = 0;
  for (const auto& app : observe::applications(trace)) {
    if (!app.completed) continue;
    // Applications on the buffer are exclusive, so start order is
    // application order and occupancy at start is the running sum.
    if (app.routine == "put") {
      if (occupancy >= capacity && !flow.bound_violation) {
        flow.bound_violation = "put on full buffer at event " + std::to_string(app.started);
      }
      ++occupancy;
      flow.produced.push_back(app.args.at(1));
    } else if (app.routine == "take") {
      if (occupancy <= 0 && !flow.bound_violation) {
        flow.bound_violation = "take on empty buffer at event " + std::to_string(app.started);
      }
      --occupancy;
      flow.consumed.push_back(app.result.value_or(Value{}));
    }
    flow.max_occupancy = std::max(flow.max_occupancy, occupancy);
  }
  return flow;
}

std::vector<Stat> buffer_stats(const Trace& trace) {
  auto flow = buffer_flow(trace, INT64_MAX);
  std::vector<std::string> items;
  for (const auto& v : flow.consumed) items.push_back(v.is_integer() ? std::to_string(v.as_integer()) : "?");
  return {{"consumed", std::to_string(flow.consumed.size())},
          {"max_occupancy", std::to_string(flow.max_occupancy)},
          {"order", join(items)}};
}

Scenario producer_consumer(const ScenarioConfig& cfg) {
  require_at_least("capacity", cfg.capacity, 1);
  require_at_least("producers", cfg.producers, 1);
  require_at_least("consumers", cfg.consumers, 1);
  require_at_least("items", cfg.items, 0);
  Program program;
  program.install = [cfg](Runtime& rt) {
    auto br = rt.create_region(RegionKind::active);
    ObjectState buffer(buffer_table());
    buffer.set("capacity", cfg.capacity).set("count", 0).set("head", 0);
    for (std::int64_t i = 0; i < cfg.capacity; ++i) buffer.set(slot(i), 0);
    auto b = rt.create_object(br, std::move(buffer));

    std::vector<SeparateRef> producers;
    for (std::int64_t k = 0; k < cfg.producers; ++k) {
      ObjectState s(producer_table());
      s.set("buffer", b).set("first", k).set("stride", cfg.producers).set("items", cfg.items).set("produced", 0);
      producers.push_back(rt.create_object(rt.create_region(RegionKind::active), std::move(s)));
    }
    std::vector<SeparateRef> consumers;
    for (std::int64_t k = 0; k < cfg.consumers; ++k) {
      const auto quota = cfg.items / cfg.consumers + (k < cfg.items % cfg.consumers ? 1 : 0);
      ObjectState s(consumer_table());
      s.set("buffer", b).set("quota", quota).set("consumed", 0);
      consumers.push_back(rt.create_object(rt.create_region(RegionKind::active), std::move(s)));
    }
    for (auto p : producers) rt.log_command(rt.root(), CallRequest{p, "run", {}});
    for (auto c : consumers) rt.log_command(rt.root(), CallRequest{c, "run", {}});
  };
  program.analyze = [cfg](const Runtime& rt, const RunResult& result) {
    const auto& trace = rt.trace();
    auto out = common_verdicts(trace, result);
    auto flow = buffer_flow(trace, cfg.capacity);
    out.push_back(make_verdict("buffer_bounds", !flow.bound_violation, flow.bound_violation.value_or("-")));

    auto sorted = flow.consumed;
    std::sort(sorted.begin(), sorted.end(),
              [](const Value& a, const Value& b) { return a.as_integer() < b.as_integer(); });
    bool all_items = static_cast<std::int64_t>(sorted.size()) == cfg.items;
    for (std::size_t i = 0; all_items && i < sorted.size(); ++i) {
      all_items = sorted[i] == Value{static_cast<std::int64_t>(i)};
    }
    const bool fifo = flow.consumed == flow.produced;
    out.push_back(make_verdict("fifo", fifo && all_items,
                               fifo ? (all_items ? "-" : "consumed items differ from produced items")
                                    : "consumption order differs from production order"));
    out.push_back(to_verdict(check_wait_soundness(trace)));
    return out;
  };
  return Scenario{std::move(program), buffer_stats};
}

// -- hexapod gait ---------------------------------------------------------------

constexpr std::string_view kProtractionClauses =
    "me.legs_retracted; partner.legs_down; not partner.protraction_pending";

Task walk(CallContext& ctx) {
  const auto me = ctx.self().ref("me");
  const auto partner = ctx.self().ref("partner");
  const auto steps = ctx.self().integer("steps");
  for (std::int64_t s = 0; s < steps; ++s) {
    const std::vector<Value> both{me, partner};
    const std::vector<Value> own{me};
    co_await ctx.call(ctx.current(), "begin_protraction", both);
    co_await ctx.call(ctx.current(), "end_protraction", both);
    co_await ctx.call(ctx.current(), "begin_retraction", own);
    co_await ctx.call(ctx.current(), "end_retraction", own);
  }
  co_return Value{};
}

Task begin_protraction(CallContext& ctx) {
  auto& me = ctx.deref(ctx.arg("me").as_ref());
  me.set("legs_down", false).set("protraction_pending", true);
  co_return Value{};
}

Task end_protraction(CallContext& ctx) {
  auto& me = ctx.deref(ctx.arg("me").as_ref());
  me.set("legs_down", true).set("legs_retracted", false).set("protraction_pending", false);
  me.set("protractions", me.integer("protractions") + 1);
  co_return Value{};
}

Task begin_retraction(CallContext& ctx) {
  ctx.deref(ctx.arg("me").as_ref()).set("retracting", true);
  co_return Value{};
}

Task end_retraction(CallContext& ctx) {
  ctx.deref(ctx.arg("me").as_ref()).set("retracting", false).set("legs_retracted", true);
  co_return Value{};
}

Clause leg_clause(std::string name, std::string formal, std::string field, bool expected) {
  return Clause{std::move(name), {formal},
                [formal, field, expected](const ClauseEnv& env) {
                  return env.separate(formal).boolean(field) == expected;
                }};
}

std::shared_ptr<const RoutineTable> controller_table() {
  static const auto table = [] {
    auto t = std::make_shared<RoutineTable>("controller");
    t->add(make_routine("walk", CallKind::command, {}, walk));
    t->add(make_routine("begin_protraction", CallKind::command, {"me", "partner"}, begin_protraction,
                        Contract{"begin_protraction",
                                 {leg_clause("me.legs_retracted", "me", "legs_retracted", true),
                                  leg_clause("partner.legs_down", "partner", "legs_down", true),
                                  leg_clause("not partner.protraction_pending", "partner",
                                             "protraction_pending", false)},
                                 {}}));
    t->add(make_routine("end_protraction", CallKind::command, {"me", "partner"}, end_protraction,
                        Contract{"end_protraction",
                                 {leg_clause("partner.legs_retracted", "partner", "legs_retracted", true)},
                                 {}}));
    t->add(make_routine("begin_retraction", CallKind::command, {"me"}, begin_retraction,
                        Contract{"begin_retraction", {leg_clause("me.legs_down", "me", "legs_down", true)}, {}}));
    t->add(make_routine("end_retraction", CallKind::command, {"me"}, end_retraction));
    return t;
  }();
  return table;
}

/// Per leg-group region: [begin_protraction start, end_protraction end].
std::map<RegionId, std::vector<std::pair<std::uint64_t, std::uint64_t>>> protraction_intervals(
    const Trace& trace) {
  std::map<RegionId, std::vector<std::pair<std::uint64_t, std::uint64_t>>> out;
  std::map<RegionId, std::uint64_t> begun;
  for (const auto& app : observe::applications(trace)) {
    if (app.args.empty() || !app.args[0].is_ref()) continue;
    const auto group = app.args[0].as_ref().region;
    if (app.routine == "begin_protraction") {
      out.try_emplace(group);
      begun[group] = app.started;
    } else if (app.routine == "end_protraction" && begun.contains(group)) {
      out[group].emplace_back(begun[group], app.ended);
      begun.erase(group);
    }
  }
  for (const auto& [group, start] : begun) out[group].emplace_back(start, trace.size());
  return out;
}

std::vector<Stat> gait_stats(const Trace& trace) {
  std::vector<std::string> parts;
  for (const auto& [group, spans] : protraction_intervals(trace)) {
    parts.push_back("g" + to_string(group) + "=" + std::to_string(spans.size()));
  }
  return {{"protractions", join(parts)}};
}

Scenario hexapod(const ScenarioConfig& cfg) {
  require_at_least("steps", cfg.steps, 0);
  Program program;
  program.install = [steps = cfg.steps](Runtime& rt) {
    auto legs_table = std::make_shared<RoutineTable>("legs");
    std::array<SeparateRef, 2> groups;
    for (auto& g : groups) {
      ObjectState s(legs_table);
      s.set("legs_retracted", true).set("legs_down", true).set("protraction_pending", false);
      s.set("retracting", false).set("protractions", 0);
      g = rt.create_object(rt.create_region(RegionKind::active), std::move(s));
    }
    std::array<SeparateRef, 2> controllers;
    for (std::size_t i = 0; i < 2; ++i) {
      ObjectState s(controller_table());
      s.set("me", groups[i]).set("partner", groups[1 - i]).set("steps", steps);
      controllers[i] = rt.create_object(rt.create_region(RegionKind::active), std::move(s));
    }
    for (auto c : controllers) rt.log_command(rt.root(), CallRequest{c, "walk", {}});
  };
  program.analyze = [](const Runtime& rt, const RunResult& result) {
    const auto& trace = rt.trace();
    auto out = common_verdicts(trace, result);

    auto intervals = protraction_intervals(trace);
    std::string overlap = "-";
    if (intervals.size() == 2) {
      const auto& a = intervals.begin()->second;
      const auto& b = std::next(intervals.begin())->second;
      for (const auto& x : a) {
        for (const auto& y : b) {
          if (x.first <= y.second && y.first <= x.second && overlap == "-") {
            overlap = "events=" + std::to_string(x.first) + "," + std::to_string(y.first);
          }
        }
      }
    }
    out.push_back(make_verdict("gait_alternation", overlap == "-", overlap));

    std::string unchecked = "-";
    const auto& events = trace.events();
    for (std::size_t i = 0; i < events.size() && unchecked == "-"; ++i) {
      const auto& e = events[i];
      if (e.kind != EventKind::application_started || e.detail.at("routine") != "begin_protraction") continue;
      const bool ok = i > 0 && events[i - 1].kind == EventKind::wait_checked_true &&
                      events[i - 1].ticket == e.ticket &&
                      events[i - 1].detail.find("clauses") == kProtractionClauses;
      if (!ok) unchecked = "event=" + std::to_string(e.index);
    }
    out.push_back(make_verdict("protraction_wait_checked", unchecked == "-", unchecked));
    return out;
  };
  return Scenario{std::move(program), gait_stats};
}

// -- nested cross-query -----------------------------------------------------------

Task set_peer(CallContext& ctx) {
  ctx.self().set("peer", ctx.arg("peer"));
  co_return Value{};
}

Task ping(CallContext& ctx) {
  const auto peer = ctx.self().ref("peer");
  // Holds our own region while waiting on the peer's.
  const auto v = co_await ctx.call(peer, "value");
  ctx.self().set("seen", v);
  co_return Value{};
}

Task value_of(CallContext& ctx) { co_return ctx.self().get("value"); }

std::shared_ptr<const RoutineTable> node_table() {
  static const auto table = [] {
    auto t = std::make_shared<RoutineTable>("node");
    t->add(make_routine("set_peer", CallKind::command, {"peer"}, set_peer));
    t->add(make_routine("ping", CallKind::command, {}, ping));
    t->add(make_routine("value", CallKind::query, {}, value_of));
    return t;
  }();
  return table;
}

std::vector<Stat> nested_stats(const Trace& trace) {
  std::string cycle = "-";
  for (const auto& e : trace.events()) {
    if (auto c = e.detail.find("cycle")) {
      cycle = std::string(*c);
      break;
    }
  }
  return {{"cycle", cycle}};
}

Scenario nested_query(const ScenarioConfig&) {
  Program program;
  program.install = [](Runtime& rt) {
    std::array<SeparateRef, 2> nodes;
    for (std::size_t i = 0; i < 2; ++i) {
      ObjectState s(node_table());
      s.set("value", static_cast<std::int64_t>(i + 1));
      nodes[i] = rt.create_object(rt.create_region(RegionKind::active), std::move(s));
    }
    rt.log_command(rt.root(), CallRequest{nodes[0], "set_peer", {nodes[1]}});
    rt.log_command(rt.root(), CallRequest{nodes[1], "set_peer", {nodes[0]}});
    for (auto n : nodes) rt.log_command(rt.root(), CallRequest{n, "ping", {}});
  };
  program.analyze = [](const Runtime& rt, const RunResult& result) {
    return common_verdicts(rt.trace(), result);
  };
  return Scenario{std::move(program), nested_stats};
}

}  // namespace

std::span<const std::string_view> scenario_names() { return kNames; }

std::span<const std::string_view> scenario_parameters(std::string_view scenario) {
  if (scenario == "philosophers") return kPhilosopherParams;
  if (scenario == "producer-consumer") return kBufferParams;
  if (scenario == "hexapod") return kGaitParams;
  return {};
}

Scenario make_scenario(const ScenarioConfig& config) {
  if (config.scenario == "philosophers") return philosophers(config);
  if (config.scenario == "producer-consumer") return producer_consumer(config);
  if (config.scenario == "hexapod") return hexapod(config);
  if (config.scenario == "nested-query") return nested_query(config);
  config_error("unknown scenario '" + config.scenario + "'");
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  auto scenario = make_scenario(config);
  auto run = run_seed(scenario.program, config.seed, config.step_budget);
  if (run.error) throw Error(*run.error);
  ScenarioResult out;
  out.stats = scenario.stats(run.trace);
  out.trace = std::move(run.trace);
  out.run = run.result;
  out.verdicts = std::move(run.verdicts);
  return out;
}

}  // namespace scoop
