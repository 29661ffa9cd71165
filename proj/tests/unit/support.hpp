#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "scoop/runtime.hpp"

namespace scoop::testing {

inline Routine command(std::string name, std::vector<std::string> formals, Body body, Contract contract = {}) {
  contract.id = name;
  return Routine{std::move(name), CallKind::command, std::move(formals), std::move(contract), std::move(body)};
}

inline Routine query(std::string name, std::vector<std::string> formals, Body body, Contract contract = {}) {
  contract.id = name;
  return Routine{std::move(name), CallKind::query, std::move(formals), std::move(contract), std::move(body)};
}

inline Task bump(CallContext& ctx) {
  auto& self = ctx.self();
  self.set("count", self.integer("count") + 1);
  co_return Value{};
}

inline Task read_count(CallContext& ctx) { co_return ctx.self().get("count"); }

inline Task fail_body(CallContext&) {
  throw Error(ErrorCode::body_exception, "boom");
  co_return Value{};
}

// count: integer; bump (command), get (query), fail (command), fail_query (query)
inline std::shared_ptr<RoutineTable> counter_table() {
  auto t = std::make_shared<RoutineTable>("counter");
  t->add(command("bump", {}, bump));
  t->add(query("get", {}, read_count));
  t->add(command("fail", {}, fail_body));
  t->add(query("fail_query", {}, fail_body));
  return t;
}

inline ObjectState counter(std::int64_t start = 0) {
  ObjectState s(counter_table());
  s.set("count", start);
  return s;
}

inline std::vector<EventKind> kinds(const Trace& trace) {
  std::vector<EventKind> out;
  for (const auto& e : trace.events()) out.push_back(e.kind);
  return out;
}

inline std::size_t count_kind(const Trace& trace, EventKind k) {
  std::size_t n = 0;
  for (const auto& e : trace.events()) n += e.kind == k;
  return n;
}

}  // namespace scoop::testing
