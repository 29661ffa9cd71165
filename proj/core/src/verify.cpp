#include "scoop/verify.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "scoop/error.hpp"

namespace scoop {
namespace {

[[noreturn]] void malformed(const TraceEvent& e, const std::string& what) {
  throw Error(ErrorCode::malformed_trace, "event " + std::to_string(e.index) + ": " + what);
}

Ticket ticket_of(const TraceEvent& e) {
  if (!e.ticket) malformed(e, "missing ticket");
  return *e.ticket;
}

ProcessorId processor_of(const TraceEvent& e) {
  if (!e.processor) malformed(e, "missing processor");
  return *e.processor;
}

RegionId region_of(const TraceEvent& e) {
  if (!e.region) malformed(e, "missing region");
  return *e.region;
}

std::set<RegionId> regions_of(const TraceEvent& e) { return parse_regions(e.detail.at("regions")); }

bool is_terminal(EventKind k) { return k == EventKind::application_completed || k == EventKind::exception; }

std::string region_list(const std::set<RegionId>& rs) { return format_regions(rs); }

}  // namespace

bool Report::has(std::string_view kind) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

Verdict to_verdict(const Report& report) {
  Verdict v{report.name, report.passed(), "-"};
  if (!report.passed()) {
    const auto& first = report.violations.front();
    v.detail = first.kind + " events=" + std::to_string(first.first) + "," + std::to_string(first.second);
    if (report.violations.size() > 1) v.detail += " violations=" + std::to_string(report.violations.size());
  }
  return v;
}

std::string format_verdict(const Verdict& v) {
  return "VERDICT " + v.name + (v.pass ? " pass " : " fail ") + (v.detail.empty() ? "-" : v.detail);
}

Report check_race_freedom(const Trace& trace) {
  Report report{"race_freedom", {}};
  struct Hold {
    ProcessorId processor;
    std::uint64_t depth = 0;
    std::uint64_t since = 0;
  };
  struct Open {
    ProcessorId processor;
    std::set<RegionId> regions;
    std::uint64_t start = 0;
  };
  std::map<RegionId, Hold> holds;
  std::map<Ticket, Open> open;
  std::map<Ticket, std::uint64_t> acquired_at;
  std::set<Ticket> finished;

  for (const auto& e : trace.events()) {
    switch (e.kind) {
      case EventKind::reservation_acquired: {
        const auto p = processor_of(e);
        acquired_at[ticket_of(e)] = e.index;
        for (auto r : regions_of(e)) {
          auto it = holds.find(r);
          if (it == holds.end()) {
            holds.emplace(r, Hold{p, 1, e.index});
          } else if (it->second.processor == p) {
            ++it->second.depth;
          } else {
            report.violations.push_back({"interval_overlap", it->second.since, e.index,
                                         "region " + to_string(r) + " acquired by " + to_string(p) +
                                             " while held by " + to_string(it->second.processor)});
            it->second = Hold{p, 1, e.index};
          }
        }
        break;
      }
      case EventKind::reservation_released: {
        const auto p = processor_of(e);
        for (auto r : regions_of(e)) {
          auto it = holds.find(r);
          if (it != holds.end() && it->second.processor == p && --it->second.depth == 0) holds.erase(it);
        }
        break;
      }
      case EventKind::application_started: {
        const auto p = processor_of(e);
        const auto t = ticket_of(e);
        if (open.contains(t) || finished.contains(t)) malformed(e, "ticket " + to_string(t) + " started twice");
        auto rs = regions_of(e);
        for (auto r : rs) {
          auto it = holds.find(r);
          if (it == holds.end() || it->second.processor != p) {
            auto at = acquired_at.find(t);
            report.violations.push_back({"partial_reservation",
                                         at == acquired_at.end() ? e.index : at->second, e.index,
                                         "region " + to_string(r) + " not held at start"});
          }
        }
        for (const auto& [u, app] : open) {
          if (app.processor == p) continue;
          std::vector<RegionId> shared;
          std::set_intersection(app.regions.begin(), app.regions.end(), rs.begin(), rs.end(),
                                std::back_inserter(shared));
          if (!shared.empty()) {
            report.violations.push_back({"interval_overlap", app.start, e.index,
                                         "region " + to_string(shared.front()) + " used by tickets " +
                                             to_string(u) + " and " + to_string(t)});
          }
        }
        open.emplace(t, Open{p, std::move(rs), e.index});
        break;
      }
      case EventKind::application_completed: {
        const auto t = ticket_of(e);
        if (!open.erase(t)) malformed(e, "completion of ticket " + to_string(t) + " that is not running");
        finished.insert(t);
        break;
      }
      case EventKind::exception: {
        const auto t = ticket_of(e);
        if (open.erase(t)) finished.insert(t);
        break;
      }
      default:
        break;
    }
  }
  if (!open.empty()) {
    throw Error(ErrorCode::malformed_trace,
                "application of ticket " + to_string(open.begin()->first) + " never terminates");
  }
  return report;
}

Report check_order_and_sync(const Trace& trace) {
  Report report{"order_and_sync", {}};
  const auto& events = trace.events();

  // Pass 1: application windows, query results, and which exceptions are
  // acts of a processor rather than drained requests.
  std::map<Ticket, std::pair<std::uint64_t, std::uint64_t>> window;
  std::map<Ticket, std::uint64_t> result_at;
  std::set<std::uint64_t> acting_exceptions;
  {
    std::set<Ticket> granted;
    for (const auto& e : events) {
      switch (e.kind) {
        case EventKind::reservation_acquired: granted.insert(ticket_of(e)); break;
        case EventKind::reservation_released: granted.erase(ticket_of(e)); break;
        case EventKind::application_started: window[ticket_of(e)] = {e.index, events.size()}; break;
        case EventKind::application_completed:
        case EventKind::exception: {
          const auto t = ticket_of(e);
          if (granted.contains(t) || window.contains(t)) acting_exceptions.insert(e.index);
          auto it = window.find(t);
          if (it != window.end() && it->second.second == events.size()) it->second.second = e.index;
          break;
        }
        case EventKind::query_result: result_at.emplace(ticket_of(e), e.index); break;
        default: break;
      }
    }
  }

  auto actor = [&](const TraceEvent& e) -> std::optional<ProcessorId> {
    switch (e.kind) {
      case EventKind::reservation_queued:
      case EventKind::query_result:
        return std::nullopt;
      case EventKind::region_created: {
        ProcessorId creator{std::stoull(std::string(e.detail.at("creator")))};
        return creator;
      }
      case EventKind::exception:
        if (!acting_exceptions.contains(e.index)) return std::nullopt;
        return e.processor;
      default:
        return e.processor;
    }
  };

  using Pair = std::pair<ProcessorId, RegionId>;
  std::map<Ticket, Pair> pair_of;
  std::map<Ticket, std::size_t> position;
  std::map<Pair, std::size_t> logged;
  std::map<Pair, std::pair<std::size_t, std::uint64_t>> last_started;

  for (const auto& e : events) {
    if (e.kind == EventKind::call_logged || e.kind == EventKind::query_issued) {
      const auto t = ticket_of(e);
      const Pair key{processor_of(e), region_of(e)};
      pair_of[t] = key;
      position[t] = logged[key]++;
    }
    if (e.kind == EventKind::application_started) {
      const auto t = ticket_of(e);
      auto it = pair_of.find(t);
      if (it == pair_of.end()) malformed(e, "start of unlogged ticket " + to_string(t));
      auto last = last_started.find(it->second);
      if (last != last_started.end() && position[t] < last->second.first) {
        report.violations.push_back({"per_caller_order", last->second.second, e.index,
                                     "ticket " + to_string(t) + " applied after a later-logged call"});
      } else {
        last_started[it->second] = {position[t], e.index};
      }
    }
    if (e.kind == EventKind::query_issued) {
      const auto q = ticket_of(e);
      const auto caller = processor_of(e);
      auto res = result_at.find(q);
      if (res == result_at.end()) malformed(e, "query " + to_string(q) + " has no result");
      auto own = window.find(q);
      for (auto i = e.index + 1; i < res->second; ++i) {
        const auto& x = events[i];
        if (actor(x) != caller || x.ticket == q) continue;
        if (own != window.end() && own->second.first < i && i < own->second.second) continue;
        report.violations.push_back({"query_silence", e.index, i,
                                     "processor " + to_string(caller) + " acted while waiting for " +
                                         to_string(q)});
        break;
      }
    }
  }
  return report;
}

Report check_wait_soundness(const Trace& trace) {
  Report report{"wait_soundness", {}};
  const auto& events = trace.events();
  std::set<Ticket> checked;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (e.kind == EventKind::wait_checked_true || e.kind == EventKind::wait_checked_false) {
      checked.insert(ticket_of(e));
    }
    if (e.kind != EventKind::application_started || !checked.contains(ticket_of(e))) continue;
    const bool ok = i > 0 && events[i - 1].kind == EventKind::wait_checked_true &&
                    events[i - 1].ticket == e.ticket;
    if (!ok) {
      report.violations.push_back({"unchecked_start", i > 0 ? i - 1 : 0, e.index,
                                   "start of " + to_string(ticket_of(e)) + " not preceded by a true check"});
    }
  }
  return report;
}

std::string_view to_string(Mutation m) {
  switch (m) {
    case Mutation::interval_overlap: return "interval_overlap";
    case Mutation::per_caller_reorder: return "per_caller_reorder";
    case Mutation::query_silence_break: return "query_silence_break";
    case Mutation::partial_reservation: return "partial_reservation";
  }
  return "?";
}

std::optional<Mutation> parse_mutation(std::string_view text) {
  for (auto m : kMutations) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

std::string_view expected_violation(Mutation m) {
  switch (m) {
    case Mutation::interval_overlap: return "interval_overlap";
    case Mutation::per_caller_reorder: return "per_caller_order";
    case Mutation::query_silence_break: return "query_silence";
    case Mutation::partial_reservation: return "partial_reservation";
  }
  return "?";
}

namespace {

struct AppSpan {
  Ticket ticket;
  ProcessorId processor;
  std::set<RegionId> regions;
  std::size_t start = 0;
  std::size_t end = 0;
};

std::vector<AppSpan> completed_spans(const std::vector<TraceEvent>& events) {
  std::map<Ticket, AppSpan> open;
  std::vector<AppSpan> out;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (e.kind == EventKind::application_started) {
      open[*e.ticket] = AppSpan{*e.ticket, *e.processor, regions_of(e), i, 0};
    } else if (e.kind == EventKind::application_completed) {
      auto it = open.find(*e.ticket);
      if (it == open.end()) continue;
      it->second.end = i;
      out.push_back(it->second);
      open.erase(it);
    }
  }
  return out;
}

std::optional<Trace> overlap(const Trace& trace) {
  auto events = trace.events();
  auto spans = completed_spans(events);
  for (const auto& a : spans) {
    for (const auto& b : spans) {
      if (b.start <= a.end || a.processor == b.processor) continue;
      std::vector<RegionId> shared;
      std::set_intersection(a.regions.begin(), a.regions.end(), b.regions.begin(), b.regions.end(),
                            std::back_inserter(shared));
      if (shared.empty()) continue;
      TraceEvent done = events[a.end];
      events.erase(events.begin() + static_cast<std::ptrdiff_t>(a.end));
      events.insert(events.begin() + static_cast<std::ptrdiff_t>(b.start), std::move(done));
      Trace out;
      out.assign(std::move(events));
      return out;
    }
  }
  return std::nullopt;
}

std::optional<Trace> reorder(const Trace& trace) {
  auto events = trace.events();
  std::set<Ticket> started;
  for (const auto& e : events) {
    if (e.kind == EventKind::application_started) started.insert(*e.ticket);
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& a = events[i];
    if (a.kind != EventKind::call_logged || !started.contains(*a.ticket)) continue;
    for (std::size_t j = i + 1; j < events.size(); ++j) {
      const auto& b = events[j];
      if (b.kind != EventKind::call_logged || b.processor != a.processor || b.region != a.region ||
          !started.contains(*b.ticket)) {
        continue;
      }
      std::swap(events[i], events[j]);
      Trace out;
      out.assign(std::move(events));
      return out;
    }
  }
  return std::nullopt;
}

std::optional<Trace> silence_break(const Trace& trace) {
  auto events = trace.events();
  std::uint64_t max_ticket = 0;
  for (const auto& e : events) {
    if (e.ticket) max_ticket = std::max(max_ticket, e.ticket->value());
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& q = events[i];
    if (q.kind != EventKind::query_issued) continue;
    TraceEvent injected;
    injected.kind = EventKind::call_logged;
    injected.processor = q.processor;
    injected.region = q.region;
    injected.ticket = Ticket{max_ticket + 1};
    injected.detail = Detail{{"routine", "injected"},
                             {"executor", to_string(*q.processor)},
                             {"regions", to_string(*q.region)}};
    events.insert(events.begin() + static_cast<std::ptrdiff_t>(i + 1), std::move(injected));
    Trace out;
    out.assign(std::move(events));
    return out;
  }
  return std::nullopt;
}

std::optional<Trace> partial(const Trace& trace) {
  auto events = trace.events();
  std::set<Ticket> started;
  for (const auto& e : events) {
    if (e.kind == EventKind::application_started) started.insert(*e.ticket);
  }
  // Only a reservation taken outside any enclosing application of the same
  // processor, so the dropped region is not held some other way.
  std::map<Ticket, ProcessorId> open;
  for (auto& e : events) {
    if (e.kind == EventKind::application_started) open.emplace(*e.ticket, *e.processor);
    if (is_terminal(e.kind)) open.erase(*e.ticket);
    if (e.kind != EventKind::reservation_acquired || !started.contains(*e.ticket)) continue;
    const bool nested = std::any_of(open.begin(), open.end(),
                                    [&](const auto& kv) { return kv.second == *e.processor; });
    if (nested) continue;
    auto rs = regions_of(e);
    if (rs.size() < 2) continue;
    rs.erase(std::prev(rs.end()));
    Detail d;
    for (const auto& [k, v] : e.detail.items()) d.add(k, k == "regions" ? region_list(rs) : v);
    e.detail = std::move(d);
    Trace out;
    out.assign(std::move(events));
    return out;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Trace> mutate(const Trace& trace, Mutation m) {
  switch (m) {
    case Mutation::interval_overlap: return overlap(trace);
    case Mutation::per_caller_reorder: return reorder(trace);
    case Mutation::query_silence_break: return silence_break(trace);
    case Mutation::partial_reservation: return partial(trace);
  }
  return std::nullopt;
}

}  // namespace scoop
