#include "scoop/runtime.hpp"

#include <algorithm>
#include <coroutine>
#include <deque>
#include <exception>
#include <utility>

namespace scoop {

RoutineTable& RoutineTable::add(Routine routine) {
  auto name = routine.name;
  routines_.insert_or_assign(std::move(name), std::move(routine));
  return *this;
}

const Routine* RoutineTable::find(std::string_view name) const {
  auto it = routines_.find(name);
  return it == routines_.end() ? nullptr : &it->second;
}

std::string to_string(const Transition& t) {
  switch (t.kind) {
    case TransitionKind::grant: return "grant(" + to_string(t.ticket) + ")";
    case TransitionKind::run: return "run(" + to_string(t.processor) + ")";
    case TransitionKind::deliver: return "deliver(" + to_string(t.ticket) + ")";
  }
  return "?";
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::quiescent: return "quiescent";
    case RunStatus::deadlock: return "deadlock";
    case RunStatus::stalled: return "stalled";
    case RunStatus::budget_exceeded: return "budget_exceeded";
  }
  return "?";
}

struct Runtime::Impl {
  struct ObjectRecord {
    RegionId region;
    ObjectState state;
  };

  struct CallPlan {
    std::shared_ptr<const RoutineTable> table;
    const Routine* routine = nullptr;
    ProcessorId executor;
    bool local = false;
    std::set<RegionId> regions;
    Separateness separateness;
  };

  struct PendingCall {
    CallSpec spec;
    std::shared_ptr<const RoutineTable> table;
    const Routine* routine = nullptr;
    ProcessorId executor;
    std::set<RegionId> regions;
    CompiledPrecondition pre;
    // Region versions seen by the last false wait check.
    std::optional<std::map<RegionId, std::uint64_t>> stale_at;
  };

  struct Application {
    CallSpec spec;
    std::shared_ptr<const RoutineTable> table;
    const Routine* routine = nullptr;
    std::set<RegionId> regions;
    std::set<RegionId> acquired;
    CompiledPrecondition pre;
    Snapshot old;
    std::unique_ptr<CallContext> ctx;
    Task task;
    std::coroutine_handle<> resume_point;
    bool begun = false;
    bool runnable = true;
    // Host-level sequential calls on the root processor leave no trace.
    bool traced = true;
  };

  struct ProcessorState {
    ProcessorId id;
    RegionId home;
    std::deque<Ticket> queue;
    std::vector<std::unique_ptr<Application>> stack;
    std::optional<Ticket> blocked_on;
  };

  struct Reply {
    ProcessorId caller;
    RegionId region;
    std::optional<Value> value;
    std::optional<Exception> error;
    bool ready = false;
    bool delivered = false;
  };

  class LiveView final : public StateView {
   public:
    LiveView(Impl& rt, ProcessorId p) : rt_(rt), p_(p) {}
    const ObjectState& read(const SeparateRef& ref) const override {
      if (!rt_.readable(p_, ref.region)) {
        throw Error(ErrorCode::illegal_dereference,
                    "processor " + to_string(p_) + " does not hold region " + to_string(ref.region));
      }
      return rt_.object(ref).state;
    }

   private:
    Impl& rt_;
    ProcessorId p_;
  };

  struct QueryAwaiter {
    Impl* rt;
    ProcessorId processor;
    Ticket ticket;

    bool await_ready() const noexcept { return false; }
    void await_suspend(std::coroutine_handle<> h) { rt->suspend(processor, ticket, h); }
    Value await_resume() { return rt->take_reply(ticket); }
  };

  explicit Impl(RuntimeOptions opts)
      : options(opts), chooser(std::make_unique<SeededChooser>(opts.seed)) {
    root_region = RegionId{next_region++};
    root = ProcessorId{next_processor++};
    regions.emplace(root_region, Region{root_region, RegionKind::active, root, root, {}, {}, {}, {}, 0});
    processors.emplace(root, ProcessorState{root, root_region, {}, {}, {}});
  }

  // -- lookups -------------------------------------------------------------

  Region& region_ref(RegionId id) {
    auto it = regions.find(id);
    if (it == regions.end()) throw Error(ErrorCode::unknown_region, "region " + to_string(id));
    return it->second;
  }
  const Region& region_ref(RegionId id) const { return const_cast<Impl*>(this)->region_ref(id); }

  ProcessorState& proc(ProcessorId id) {
    auto it = processors.find(id);
    if (it == processors.end()) throw Error(ErrorCode::bad_call, "unknown processor " + to_string(id));
    return it->second;
  }
  const ProcessorState& proc(ProcessorId id) const { return const_cast<Impl*>(this)->proc(id); }

  ObjectRecord& object(const SeparateRef& ref) {
    auto it = objects.find(ref.object);
    if (it == objects.end() || it->second.region != ref.region) {
      throw Error(ErrorCode::unknown_target,
                  "no object " + to_string(ref.object) + " in region " + to_string(ref.region));
    }
    return it->second;
  }

  bool readable(ProcessorId p, RegionId r) const {
    if (proc(p).home == r) return true;
    const auto& reg = region_ref(r);
    return reg.holder && *reg.holder == p;
  }

  bool busy(ProcessorId p) const {
    const auto& ps = proc(p);
    return !ps.stack.empty() || ps.blocked_on.has_value();
  }

  TraceEvent& emit(EventKind kind, std::optional<ProcessorId> p, std::optional<RegionId> r,
                   std::optional<Ticket> t, Detail detail) {
    return trace.append(kind, p, r, t, std::move(detail));
  }

  // -- creation ------------------------------------------------------------

  RegionId create_region(ProcessorId acting, RegionKind kind) {
    proc(acting);
    RegionId id{next_region++};
    Region reg{id, kind, std::nullopt, acting, {}, {}, {}, {}, 0};
    if (kind == RegionKind::active) {
      ProcessorId p{next_processor++};
      reg.processor = p;
      processors.emplace(p, ProcessorState{p, id, {}, {}, {}});
    }
    regions.emplace(id, reg);
    emit(EventKind::region_created, reg.processor, id, std::nullopt,
         Detail{{"kind", std::string(to_string(kind))}, {"creator", to_string(acting)}});
    return id;
  }

  SeparateRef create_object(ProcessorId acting, RegionId region, ObjectState initial) {
    proc(acting);
    Region& reg = region_ref(region);
    if (reg.holder && *reg.holder != acting) {
      throw Error(ErrorCode::ownership_violation,
                  "region " + to_string(region) + " is held by processor " + to_string(*reg.holder));
    }
    const bool allowed = (reg.processor && *reg.processor == acting) || reg.creator == acting ||
                         (reg.holder && *reg.holder == acting);
    if (!allowed) {
      throw Error(ErrorCode::ownership_violation,
                  "processor " + to_string(acting) + " may not create objects in region " +
                      to_string(region));
    }
    ObjectId id{next_object++};
    objects.emplace(id, ObjectRecord{region, std::move(initial)});
    reg.objects.insert(id);
    ++reg.version;
    emit(EventKind::object_created, acting, region, std::nullopt, Detail{{"object", to_string(id)}});
    return SeparateRef{region, id};
  }

  // -- logging -------------------------------------------------------------

  CallPlan plan(ProcessorId caller, SeparateRef target, std::string_view name,
                const std::vector<Value>& args) {
    const ProcessorState& cs = proc(caller);
    auto& rec = object(target);
    CallPlan out;
    out.table = rec.state.routines();
    out.routine = out.table ? out.table->find(name) : nullptr;
    if (out.routine == nullptr) {
      throw Error(ErrorCode::unknown_routine, "no routine '" + std::string(name) + "'");
    }
    if (args.size() != out.routine->formals.size()) {
      throw Error(ErrorCode::bad_call, "routine '" + std::string(name) + "' takes " +
                                           std::to_string(out.routine->formals.size()) + " arguments");
    }
    const Region& target_region = region_ref(target.region);
    if (target_region.poisoned) {
      throw Error(ErrorCode::poisoned_region,
                  "region " + to_string(target.region) + " poisoned by " +
                      std::string(to_string(target_region.poisoned->code)) + ": " +
                      target_region.poisoned->message);
    }
    bool separate_arg = false;
    for (const auto& a : args) {
      if (!a.is_ref()) continue;
      region_ref(a.as_ref().region);
      separate_arg = separate_arg || a.as_ref().region != cs.home;
    }
    out.local = target.region == cs.home && !separate_arg;
    out.executor = target_region.kind == RegionKind::active ? *target_region.processor : caller;
    const RegionId exec_home = proc(out.executor).home;
    out.regions = {exec_home, target.region};
    out.separateness.emplace(std::string(kCurrent), target.region != exec_home);
    for (std::size_t i = 0; i < args.size(); ++i) {
      bool sep = false;
      if (args[i].is_ref()) {
        out.regions.insert(args[i].as_ref().region);
        sep = args[i].as_ref().region != exec_home;
      }
      out.separateness.emplace(out.routine->formals[i], sep);
    }
    return out;
  }

  Ticket log_call(ProcessorId caller, SeparateRef target, std::vector<Value> args, const CallPlan& p) {
    auto compiled = compile_precondition(p.routine->contract, p.separateness);
    Ticket t{next_ticket++};
    CallSpec spec{caller, target, p.routine->name, std::move(args), p.routine->kind,
                  p.routine->contract.id, t};

    Detail detail{{"routine", spec.routine},
                  {"executor", to_string(p.executor)},
                  {"regions", format_regions(p.regions)}};
    if (!spec.args.empty()) detail.add("args", join_values(spec.args));
    const auto kind = spec.kind == CallKind::query ? EventKind::query_issued : EventKind::call_logged;
    emit(kind, caller, target.region, t, std::move(detail));
    emit(EventKind::reservation_queued, p.executor, target.region, t,
         Detail{{"regions", format_regions(p.regions)}});

    proc(p.executor).queue.push_back(t);
    for (auto r : p.regions) region_ref(r).wait_queue.insert(t);
    if (spec.kind == CallKind::query) replies.emplace(t, Reply{caller, target.region, {}, {}, false, false});
    pending.emplace(t, PendingCall{std::move(spec), p.table, p.routine, p.executor, p.regions,
                                   std::move(compiled), std::nullopt});
    return t;
  }

  PendingCall extract_pending(Ticket t) {
    auto node = pending.extract(t);
    PendingCall pc = std::move(node.mapped());
    auto& q = proc(pc.executor).queue;
    q.erase(std::remove(q.begin(), q.end(), t), q.end());
    for (auto r : pc.regions) region_ref(r).wait_queue.erase(t);
    return pc;
  }

  // -- host-level calls ----------------------------------------------------

  void require_host_idle(ProcessorId caller) const {
    if (concluded) throw Error(ErrorCode::bad_call, "runtime has concluded");
    if (busy(caller)) {
      throw Error(ErrorCode::bad_call, "processor " + to_string(caller) + " is busy");
    }
  }

  Ticket host_command(ProcessorId caller, CallRequest call) {
    require_host_idle(caller);
    auto p = plan(caller, call.target, call.routine, call.args);
    if (p.routine->kind != CallKind::command) {
      throw Error(ErrorCode::bad_call, "'" + call.routine + "' is a query");
    }
    if (p.local) {
      run_host_local(caller, call.target, p, std::move(call.args));
      return Ticket{};
    }
    return log_call(caller, call.target, std::move(call.args), p);
  }

  Value host_query(ProcessorId caller, CallRequest call) {
    require_host_idle(caller);
    auto p = plan(caller, call.target, call.routine, call.args);
    if (p.routine->kind != CallKind::query) {
      throw Error(ErrorCode::bad_call, "'" + call.routine + "' is a command");
    }
    if (p.local) return run_host_local(caller, call.target, p, std::move(call.args));
    Ticket t = log_call(caller, call.target, std::move(call.args), p);
    proc(caller).blocked_on = t;
    while (!replies.at(t).delivered) drive_or_throw();
    return take_reply(t);
  }

  Value run_host_local(ProcessorId caller, SeparateRef target, const CallPlan& p,
                       std::vector<Value> args) {
    auto app = std::make_unique<Application>();
    app->spec = CallSpec{caller, target, p.routine->name, {}, p.routine->kind, p.routine->contract.id, {}};
    app->table = p.table;
    app->routine = p.routine;
    app->traced = false;
    app->begun = true;
    app->task = apply_local(caller, target, p.table, p.routine, std::move(args));
    app->resume_point = app->task.handle();
    host_result.reset();
    host_error = nullptr;
    proc(caller).stack.push_back(std::move(app));
    apply_call(caller);
    while (!host_result && !host_error) drive_or_throw();
    if (host_error) std::rethrow_exception(std::exchange(host_error, nullptr));
    return *std::exchange(host_result, std::nullopt);
  }

  void drive_or_throw() {
    if (steps >= options.step_budget) {
      conclude(ErrorCode::step_budget_exceeded, {});
      throw Error(ErrorCode::step_budget_exceeded, "step budget exhausted");
    }
    if (step()) return;
    auto cycle = detect_deadlock(wait_for_graph());
    if (cycle) {
      conclude(ErrorCode::deadlock_detected, *cycle);
      throw Error(ErrorCode::deadlock_detected, "wait-for cycle " + format_cycle(*cycle));
    }
    conclude(ErrorCode::stalled, {});
    throw Error(ErrorCode::stalled, "no transition enabled");
  }

  // Sequential call on the processor's own region: assertions, body,
  // postcondition, all inside the caller's current activity.
  Task apply_local(ProcessorId p, SeparateRef target, std::shared_ptr<const RoutineTable> table,
                   const Routine* routine, std::vector<Value> args) {
    CallContext ctx(*this, p, target, std::move(args), *routine);
    Separateness none{{std::string(kCurrent), false}};
    for (const auto& f : routine->formals) none.emplace(f, false);
    auto compiled = compile_precondition(routine->contract, none);
    LiveView view(*this, p);
    ClauseEnv env(target, routine->formals, ctx.args(), view);
    if (auto e = check_assertions(routine->contract, compiled, env)) throw Error(*e);
    Snapshot old;
    if (!routine->contract.ensure.empty()) old = snapshot(p, readable_regions(p));
    Value result = co_await routine->body(ctx);
    if (!routine->contract.ensure.empty()) {
      PostconditionEnv post(target, routine->formals, ctx.args(), view, old, result);
      if (auto e = check_postcondition(routine->contract, post)) throw Error(*e);
    }
    (void)table;
    co_return result;
  }

  std::set<RegionId> readable_regions(ProcessorId p) const {
    std::set<RegionId> out{proc(p).home};
    for (const auto& [id, reg] : regions) {
      if (reg.holder && *reg.holder == p) out.insert(id);
    }
    return out;
  }

  Snapshot snapshot(ProcessorId, const std::set<RegionId>& rs) {
    Snapshot s;
    for (auto r : rs) {
      s.add_region(r);
      for (auto o : region_ref(r).objects) s.add(o, objects.at(o).state);
    }
    return s;
  }

  // -- scheduling ----------------------------------------------------------

  bool executor_available(const PendingCall& pc) const {
    const auto& ps = proc(pc.executor);
    if (ps.blocked_on) return *ps.blocked_on == pc.spec.ticket;
    return ps.stack.empty();
  }

  bool regions_available(const PendingCall& pc) const {
    for (auto r : pc.regions) {
      const auto& reg = region_ref(r);
      if (reg.holder && *reg.holder != pc.executor) return false;
      if (reg.processor && *reg.processor != pc.executor && busy(*reg.processor)) return false;
    }
    return true;
  }

  bool stale(const PendingCall& pc) const {
    if (!pc.stale_at) return false;
    for (auto r : pc.regions) {
      if (region_ref(r).version != pc.stale_at->at(r)) return false;
    }
    return true;
  }

  std::vector<Transition> enabled() const {
    std::vector<Transition> out;
    if (concluded) return out;
    std::set<std::pair<ProcessorId, RegionId>> seen;
    std::set<RegionId> claimed;
    for (const auto& [t, pc] : pending) {
      // Per (caller, target region) only the oldest logged call is eligible.
      if (!seen.emplace(pc.spec.caller, pc.spec.target.region).second) continue;
      if (!executor_available(pc) || !regions_available(pc) || stale(pc)) continue;
      // Among eligible requests sharing a region, the lowest ticket goes first.
      bool overlaps = false;
      for (auto r : pc.regions) overlaps = !claimed.insert(r).second || overlaps;
      if (!overlaps) out.push_back(Transition{TransitionKind::grant, pc.executor, t});
    }
    for (const auto& [id, ps] : processors) {
      if (ps.stack.empty() || !ps.stack.back()->runnable) continue;
      // A processor blocked on its own inline query still runs that query.
      if (!ps.blocked_on || *ps.blocked_on == ps.stack.back()->spec.ticket) {
        out.push_back(Transition{TransitionKind::run, id, {}});
      }
    }
    for (const auto& [t, r] : replies) {
      if (r.ready && !r.delivered) out.push_back(Transition{TransitionKind::deliver, r.caller, t});
    }
    return out;
  }

  bool step() {
    auto options_now = enabled();
    if (options_now.empty()) return false;
    std::size_t pick = 0;
    if (options_now.size() > 1) {
      pick = chooser->choose(options_now);
      if (pick >= options_now.size()) throw Error(ErrorCode::bad_call, "chooser out of range");
    }
    const Transition t = options_now[pick];
    ++steps;
    switch (t.kind) {
      case TransitionKind::grant: acquire_and_check(t.ticket); break;
      case TransitionKind::run: apply_call(t.processor); break;
      case TransitionKind::deliver: deliver(t.ticket); break;
    }
    return true;
  }

  GrantOutcome acquire_and_check(Ticket t) {
    auto it = pending.find(t);
    if (it == pending.end()) throw Error(ErrorCode::bad_call, "no pending request " + to_string(t));
    PendingCall& pc = it->second;
    if (!executor_available(pc) || !regions_available(pc)) return GrantOutcome::queued;

    const ProcessorId exec = pc.executor;
    const RegionId where = pc.spec.target.region;
    std::set<RegionId> acquired;
    for (auto r : pc.regions) {
      auto& reg = region_ref(r);
      if (!reg.holder) {
        reg.holder = exec;
        acquired.insert(r);
      }
    }
    // The full set is listed even when an enclosing application of the same
    // processor already holds part of it.
    emit(EventKind::reservation_acquired, exec, where, t, Detail{{"regions", format_regions(pc.regions)}});

    if (!pc.pre.trivial_wait()) {
      LiveView view(*this, exec);
      ClauseEnv env(pc.spec.target, pc.routine->formals, pc.spec.args, view);
      bool holds = false;
      try {
        holds = evaluate_wait_condition(pc.routine->contract, pc.pre, env);
      } catch (const Error& e) {
        fail_unstarted(t, acquired, e.payload());
        return GrantOutcome::failed;
      }
      emit(holds ? EventKind::wait_checked_true : EventKind::wait_checked_false, exec, where, t,
           Detail{{"routine", pc.spec.routine},
                  {"clauses", wait_clause_names(pc.routine->contract, pc.pre)}});
      if (!holds) {
        release(exec, where, t, pc.regions, acquired, {});
        std::map<RegionId, std::uint64_t> seen;
        for (auto r : pc.regions) seen.emplace(r, region_ref(r).version);
        pc.stale_at = std::move(seen);
        return GrantOutcome::queued;
      }
    }

    PendingCall call = extract_pending(t);
    auto app = std::make_unique<Application>();
    app->regions = call.regions;
    app->acquired = std::move(acquired);
    app->pre = std::move(call.pre);
    app->table = std::move(call.table);
    app->routine = call.routine;
    if (!app->routine->contract.ensure.empty()) app->old = snapshot(exec, app->regions);
    Detail detail{{"routine", call.spec.routine},
                  {"kind", std::string(to_string(call.spec.kind))},
                  {"caller", to_string(call.spec.caller)},
                  {"regions", format_regions(app->regions)}};
    if (!call.spec.args.empty()) detail.add("args", join_values(call.spec.args));
    app->spec = std::move(call.spec);
    emit(EventKind::application_started, exec, where, t, std::move(detail));
    proc(exec).stack.push_back(std::move(app));
    return GrantOutcome::granted;
  }

  void fail_unstarted(Ticket t, const std::set<RegionId>& acquired, const Exception& e) {
    PendingCall pc = extract_pending(t);
    emit(EventKind::exception, pc.executor, pc.spec.target.region, t,
         Detail{{"routine", pc.spec.routine},
                {"error", std::string(to_string(e.code))},
                {"message", e.message}});
    release(pc.executor, pc.spec.target.region, t, pc.regions, acquired, {});
    if (pc.spec.kind == CallKind::query) {
      settle_reply(t, std::nullopt, e);
    } else {
      propagate_async_exception(pc.spec.target.region, e);
    }
  }

  void release(ProcessorId p, RegionId where, Ticket t, const std::set<RegionId>& listed,
               const std::set<RegionId>& acquired, const std::set<RegionId>& touched) {
    for (auto r : acquired) region_ref(r).holder.reset();
    emit(EventKind::reservation_released, p, where, t, Detail{{"regions", format_regions(listed)}});
    for (auto r : touched) ++region_ref(r).version;
  }

  void settle_reply(Ticket t, std::optional<Value> value, std::optional<Exception> error) {
    auto& reply = replies.at(t);
    reply.value = std::move(value);
    reply.error = std::move(error);
    reply.ready = true;
  }

  ApplyOutcome apply_call(ProcessorId exec) {
    ProcessorState& ps = proc(exec);
    if (ps.stack.empty() || !ps.stack.back()->runnable) {
      throw Error(ErrorCode::bad_call, "processor " + to_string(exec) + " has nothing to run");
    }
    Application& app = *ps.stack.back();
    if (!app.begun) {
      app.begun = true;
      app.ctx = std::make_unique<CallContext>(*this, exec, app.spec.target, app.spec.args, *app.routine);
      try {
        if (!app.pre.assertions.empty()) {
          LiveView view(*this, exec);
          ClauseEnv env(app.spec.target, app.routine->formals, app.ctx->args(), view);
          if (auto e = check_assertions(app.routine->contract, app.pre, env)) return finish_failed(exec, *e);
        }
        app.task = app.routine->body(*app.ctx);
      } catch (const Error& e) {
        return finish_failed(exec, e.payload());
      } catch (const std::exception& e) {
        return finish_failed(exec, Exception{ErrorCode::body_exception, e.what()});
      }
      app.resume_point = app.task.handle();
    }
    auto h = std::exchange(app.resume_point, {});
    h.resume();
    if (app.task.done()) return finish(exec);
    if (!app.resume_point && app.runnable) {
      return finish_failed(exec, Exception{ErrorCode::bad_call, "body suspended outside a query"});
    }
    return ApplyOutcome::suspended;
  }

  ApplyOutcome finish(ProcessorId exec) {
    ProcessorState& ps = proc(exec);
    Application& app = *ps.stack.back();
    if (!app.traced) {
      try {
        host_result = app.task.result();
      } catch (...) {
        host_error = std::current_exception();
      }
      ps.stack.pop_back();
      return host_error ? ApplyOutcome::failed : ApplyOutcome::completed;
    }
    Value result;
    try {
      result = app.task.result();
    } catch (const Error& e) {
      return finish_failed(exec, e.payload());
    } catch (const std::exception& e) {
      return finish_failed(exec, Exception{ErrorCode::body_exception, e.what()});
    } catch (...) {
      return finish_failed(exec, Exception{ErrorCode::body_exception, "unknown exception"});
    }
    if (!app.routine->contract.ensure.empty()) {
      LiveView view(*this, exec);
      PostconditionEnv env(app.spec.target, app.routine->formals, app.spec.args, view, app.old, result);
      try {
        if (auto e = check_postcondition(app.routine->contract, env)) return finish_failed(exec, *e);
      } catch (const Error& e) {
        return finish_failed(exec, e.payload());
      }
    }
    const Ticket t = app.spec.ticket;
    const RegionId where = app.spec.target.region;
    emit(EventKind::application_completed, exec, where, t,
         Detail{{"routine", app.spec.routine}, {"result", to_string(result)}});
    release(exec, where, t, app.regions, app.acquired, app.regions);
    const bool is_query = app.spec.kind == CallKind::query;
    ps.stack.pop_back();
    if (is_query) settle_reply(t, std::move(result), std::nullopt);
    return ApplyOutcome::completed;
  }

  ApplyOutcome finish_failed(ProcessorId exec, Exception e) {
    ProcessorState& ps = proc(exec);
    Application& app = *ps.stack.back();
    if (!app.traced) {
      host_error = std::make_exception_ptr(Error(e));
      ps.stack.pop_back();
      return ApplyOutcome::failed;
    }
    const Ticket t = app.spec.ticket;
    const RegionId where = app.spec.target.region;
    emit(EventKind::exception, exec, where, t,
         Detail{{"routine", app.spec.routine},
                {"error", std::string(to_string(e.code))},
                {"message", e.message}});
    release(exec, where, t, app.regions, app.acquired, app.regions);
    const bool is_query = app.spec.kind == CallKind::query;
    ps.stack.pop_back();
    if (is_query) {
      settle_reply(t, std::nullopt, std::move(e));
    } else {
      propagate_async_exception(where, std::move(e));
    }
    return ApplyOutcome::failed;
  }

  void propagate_async_exception(RegionId where, Exception e) {
    Region& reg = region_ref(where);
    reg.poisoned = e;
    ++reg.version;
    std::vector<Ticket> doomed;
    for (const auto& [t, pc] : pending) {
      if (pc.spec.target.region == where) doomed.push_back(t);
    }
    const Exception drained{ErrorCode::poisoned_region, "region " + to_string(where) + " poisoned by " +
                                                            std::string(to_string(e.code)) + ": " +
                                                            e.message};
    for (auto t : doomed) {
      PendingCall pc = extract_pending(t);
      emit(EventKind::exception, pc.executor, where, t,
           Detail{{"routine", pc.spec.routine},
                  {"error", std::string(to_string(drained.code))},
                  {"message", drained.message}});
      if (pc.spec.kind == CallKind::query) settle_reply(t, std::nullopt, drained);
    }
  }

  void deliver(Ticket t) {
    auto it = replies.find(t);
    if (it == replies.end() || !it->second.ready || it->second.delivered) {
      throw Error(ErrorCode::bad_call, "no reply to deliver for " + to_string(t));
    }
    Reply& reply = it->second;
    Detail detail;
    if (reply.value) {
      detail.add("result", to_string(*reply.value));
    } else {
      detail.add("error", std::string(to_string(reply.error->code)));
      detail.add("message", reply.error->message);
    }
    emit(EventKind::query_result, reply.caller, reply.region, t, std::move(detail));
    reply.delivered = true;
    ProcessorState& ps = proc(reply.caller);
    if (ps.blocked_on == t) ps.blocked_on.reset();
    if (!ps.stack.empty()) ps.stack.back()->runnable = true;
  }

  void suspend(ProcessorId p, Ticket t, std::coroutine_handle<> h) {
    ProcessorState& ps = proc(p);
    ps.blocked_on = t;
    Application& app = *ps.stack.back();
    app.resume_point = h;
    app.runnable = false;
  }

  Value take_reply(Ticket t) {
    auto node = replies.extract(t);
    Reply& reply = node.mapped();
    if (reply.error) throw Error(*reply.error);
    return std::move(*reply.value);
  }

  bool has_work() const {
    if (!pending.empty()) return true;
    for (const auto& [id, ps] : processors) {
      if (!ps.stack.empty()) return true;
    }
    for (const auto& [t, r] : replies) {
      if (r.ready && !r.delivered) return true;
    }
    return false;
  }

  WaitForGraph wait_for_graph() const {
    WaitForGraph g;
    for (const auto& [id, ps] : processors) g.add_node(id);
    std::map<std::pair<ProcessorId, RegionId>, std::set<RegionId>> earlier;
    for (const auto& [t, pc] : pending) {
      // A call also waits behind older calls of the same (caller, region).
      auto& needed = earlier[{pc.spec.caller, pc.spec.target.region}];
      needed.insert(pc.regions.begin(), pc.regions.end());
      std::optional<ProcessorId> waiter;
      if (pc.spec.kind == CallKind::query && proc(pc.spec.caller).blocked_on == t) {
        waiter = pc.spec.caller;
      } else if (!busy(pc.executor)) {
        waiter = pc.executor;
      }
      if (!waiter) continue;
      for (auto r : needed) {
        const auto& reg = region_ref(r);
        if (reg.holder && *reg.holder != *waiter) {
          g.add_edge(*waiter, *reg.holder, r);
        } else if (!reg.holder && reg.processor && *reg.processor != *waiter && busy(*reg.processor)) {
          g.add_edge(*waiter, *reg.processor, r);
        }
      }
    }
    return g;
  }

  static std::string format_cycle(const std::vector<ProcessorId>& cycle) {
    std::string out;
    for (auto p : cycle) {
      if (!out.empty()) out += ',';
      out += to_string(p);
    }
    return out;
  }

  // Closes every open application so the trace stays well formed once the
  // run cannot make progress.
  void conclude(ErrorCode code, const std::vector<ProcessorId>& cycle) {
    concluded = true;
    auto closing = [&](Detail d) {
      d.add("error", std::string(to_string(code)));
      if (!cycle.empty()) d.add("cycle", format_cycle(cycle));
      return d;
    };
    for (auto& [id, ps] : processors) {
      auto close_query = [&, pid = id](Ticket t) {
        auto& reply = replies.at(t);
        if (reply.delivered) return;
        emit(EventKind::query_result, pid, reply.region, t, closing({}));
        reply.delivered = true;
      };
      for (auto it = ps.stack.rbegin(); it != ps.stack.rend(); ++it) {
        const Application& app = **it;
        if (ps.blocked_on && app.spec.ticket != *ps.blocked_on) close_query(*ps.blocked_on);
        if (!app.traced) continue;
        emit(EventKind::exception, id, app.spec.target.region, app.spec.ticket,
             closing(Detail{{"routine", app.spec.routine}}));
      }
      if (ps.blocked_on) close_query(*ps.blocked_on);
    }
  }

  RunResult run_until_quiescent() {
    RunResult result;
    while (true) {
      if (steps >= options.step_budget && !enabled().empty()) {
        conclude(ErrorCode::step_budget_exceeded, {});
        result.status = RunStatus::budget_exceeded;
        result.steps = steps;
        return result;
      }
      if (!step()) break;
    }
    result.steps = steps;
    if (!has_work() || concluded) {
      result.status = concluded ? RunStatus::stalled : RunStatus::quiescent;
      return result;
    }
    if (auto cycle = detect_deadlock(wait_for_graph())) {
      conclude(ErrorCode::deadlock_detected, *cycle);
      result.status = RunStatus::deadlock;
      result.cycle = std::move(*cycle);
      return result;
    }
    conclude(ErrorCode::stalled, {});
    result.status = RunStatus::stalled;
    return result;
  }

  RuntimeOptions options;
  std::unique_ptr<Chooser> chooser;
  Trace trace;
  std::map<RegionId, Region> regions;
  std::map<ProcessorId, ProcessorState> processors;
  std::map<ObjectId, ObjectRecord> objects;
  std::map<Ticket, PendingCall> pending;
  std::map<Ticket, Reply> replies;
  std::uint64_t next_region = 0;
  std::uint64_t next_processor = 0;
  std::uint64_t next_object = 1;
  std::uint64_t next_ticket = 1;
  std::uint64_t steps = 0;
  bool concluded = false;
  ProcessorId root;
  RegionId root_region;
  std::optional<Value> host_result;
  std::exception_ptr host_error;
};

// -- Runtime -----------------------------------------------------------------

Runtime::Runtime(RuntimeOptions options) : impl_(std::make_unique<Impl>(options)) {}
Runtime::~Runtime() {
  // Coroutine frames reference contexts owned by the same applications;
  // drop the tasks before anything else goes.
  for (auto& [id, ps] : impl_->processors) {
    while (!ps.stack.empty()) ps.stack.pop_back();
  }
}

ProcessorId Runtime::root() const { return impl_->root; }
RegionId Runtime::root_region() const { return impl_->root_region; }

RegionId Runtime::create_region(ProcessorId acting, RegionKind kind) {
  return impl_->create_region(acting, kind);
}

SeparateRef Runtime::create_object(ProcessorId acting, RegionId region, ObjectState initial) {
  return impl_->create_object(acting, region, std::move(initial));
}

bool Runtime::is_separate(ProcessorId acting, SeparateRef ref) const {
  return ref.region != impl_->proc(acting).home;
}

Ticket Runtime::log_command(ProcessorId caller, CallRequest call) {
  return impl_->host_command(caller, std::move(call));
}

Value Runtime::call_query(ProcessorId caller, CallRequest call) {
  return impl_->host_query(caller, std::move(call));
}

GrantOutcome Runtime::acquire_and_check(Ticket ticket) { return impl_->acquire_and_check(ticket); }
ApplyOutcome Runtime::apply_call(ProcessorId executor) { return impl_->apply_call(executor); }
void Runtime::deliver(Ticket ticket) { impl_->deliver(ticket); }
void Runtime::propagate_async_exception(RegionId region, Exception e) {
  impl_->propagate_async_exception(region, std::move(e));
}

std::vector<Transition> Runtime::enabled_transitions() const { return impl_->enabled(); }
void Runtime::set_chooser(std::unique_ptr<Chooser> chooser) { impl_->chooser = std::move(chooser); }
bool Runtime::step() { return impl_->step(); }
RunResult Runtime::run_until_quiescent() { return impl_->run_until_quiescent(); }

const Trace& Runtime::trace() const { return impl_->trace; }
const Region& Runtime::region(RegionId id) const { return impl_->region_ref(id); }

Processor Runtime::processor(ProcessorId id) const {
  const auto& ps = impl_->proc(id);
  Processor out;
  out.id = ps.id;
  out.home = ps.home;
  out.request_queue = ps.queue;
  out.blocked_on = ps.blocked_on;
  if (!ps.stack.empty()) out.executing = ps.stack.back()->spec.ticket;
  out.status = ps.blocked_on ? ProcessorStatus::blocked
               : ps.stack.empty() ? ProcessorStatus::idle
                                  : ProcessorStatus::executing;
  return out;
}

std::vector<RegionId> Runtime::regions() const {
  std::vector<RegionId> out;
  for (const auto& [id, r] : impl_->regions) out.push_back(id);
  return out;
}

std::vector<ProcessorId> Runtime::processors() const {
  std::vector<ProcessorId> out;
  for (const auto& [id, p] : impl_->processors) out.push_back(id);
  return out;
}

std::optional<ReservationRequest> Runtime::pending(Ticket ticket) const {
  auto it = impl_->pending.find(ticket);
  if (it == impl_->pending.end()) return std::nullopt;
  const auto& pc = it->second;
  return ReservationRequest{ticket, pc.executor, pc.regions, pc.pre.trivial_wait()};
}

const ObjectState& Runtime::inspect(SeparateRef ref) const { return impl_->object(ref).state; }
WaitForGraph Runtime::wait_for_graph() const { return impl_->wait_for_graph(); }
bool Runtime::has_work() const { return impl_->has_work(); }
std::uint64_t Runtime::steps() const { return impl_->steps; }

std::string Runtime::state_digest() const {
  std::string out;
  for (const auto& [id, rec] : impl_->objects) {
    out += to_string(id) + "@" + to_string(rec.region) + "{" + to_string(rec.state) + "}\n";
  }
  return out;
}

// -- CallContext -------------------------------------------------------------

CallContext::CallContext(Runtime::Impl& rt, ProcessorId processor, SeparateRef current,
                         std::vector<Value> args, const Routine& routine)
    : rt_(&rt), processor_(processor), current_(current), args_(std::move(args)), routine_(&routine) {}

const Value& CallContext::arg(std::size_t i) const {
  if (i >= args_.size()) throw Error(ErrorCode::bad_call, "argument index out of range");
  return args_[i];
}

const Value& CallContext::arg(std::string_view formal) const {
  const auto& formals = routine_->formals;
  for (std::size_t i = 0; i < formals.size(); ++i) {
    if (formals[i] == formal) return args_.at(i);
  }
  throw Error(ErrorCode::bad_call, "no formal '" + std::string(formal) + "'");
}

ObjectState& CallContext::deref(const SeparateRef& ref) {
  if (!rt_->readable(processor_, ref.region)) {
    throw Error(ErrorCode::illegal_dereference,
                "processor " + to_string(processor_) + " does not hold region " + to_string(ref.region));
  }
  return rt_->object(ref).state;
}

bool CallContext::is_separate(const SeparateRef& ref) const {
  return ref.region != rt_->proc(processor_).home;
}

Task CallContext::call(SeparateRef target, std::string routine, std::vector<Value> args) {
  auto plan = rt_->plan(processor_, target, routine, args);
  if (plan.local) {
    co_return co_await rt_->apply_local(processor_, target, plan.table, plan.routine, std::move(args));
  }
  if (plan.routine->kind == CallKind::command) {
    rt_->log_call(processor_, target, std::move(args), plan);
    co_return Value{};
  }
  Ticket t = rt_->log_call(processor_, target, std::move(args), plan);
  co_return co_await Runtime::Impl::QueryAwaiter{rt_, processor_, t};
}

RegionId CallContext::create_region(RegionKind kind) { return rt_->create_region(processor_, kind); }

SeparateRef CallContext::create_object(RegionId region, ObjectState initial) {
  return rt_->create_object(processor_, region, std::move(initial));
}

}  // namespace scoop
