#include "scoop/contracts.hpp"

#include <algorithm>

namespace scoop {

const ObjectState& Snapshot::read(const SeparateRef& ref) const {
  if (!regions_.contains(ref.region)) {
    throw Error(ErrorCode::illegal_dereference,
                "region " + to_string(ref.region) + " is not part of the snapshot");
  }
  auto it = objects_.find(ref.object);
  if (it == objects_.end()) {
    throw Error(ErrorCode::unknown_target, "object " + to_string(ref.object) + " not in snapshot");
  }
  return it->second;
}

ClauseEnv::ClauseEnv(SeparateRef current, std::span<const std::string> formals,
                     std::span<const Value> args, const StateView& state)
    : current_(current), formals_(formals), args_(args), state_(state) {}

void ClauseEnv::require_declared(std::string_view formal) const {
  if (clause_ == nullptr) return;
  if (std::find(clause_->reads.begin(), clause_->reads.end(), formal) == clause_->reads.end()) {
    throw Error(ErrorCode::malformed_predicate,
                "clause '" + clause_->name + "' reads undeclared '" + std::string(formal) + "'");
  }
}

const ObjectState& ClauseEnv::current() const {
  require_declared(kCurrent);
  return state_.read(current_);
}

const Value& ClauseEnv::arg(std::string_view formal) const {
  for (std::size_t i = 0; i < formals_.size() && i < args_.size(); ++i) {
    if (formals_[i] == formal) return args_[i];
  }
  throw Error(ErrorCode::malformed_predicate, "unknown formal '" + std::string(formal) + "'");
}

const ObjectState& ClauseEnv::separate(std::string_view formal) const {
  require_declared(formal);
  return state_.read(arg(formal).as_ref());
}

PostconditionEnv::PostconditionEnv(SeparateRef current, std::span<const std::string> formals,
                                   std::span<const Value> args, const StateView& now,
                                   const StateView& old, Value result)
    : ClauseEnv(current, formals, args, now), old_(old), result_(std::move(result)) {}

const ObjectState& PostconditionEnv::old(std::string_view formal) const {
  return old_.read(arg(formal).as_ref());
}

CompiledPrecondition compile_precondition(const Contract& contract, const Separateness& separateness) {
  CompiledPrecondition out;
  for (std::size_t i = 0; i < contract.require.size(); ++i) {
    const Clause& clause = contract.require[i];
    if (clause.name.empty() || !clause.holds) {
      throw Error(ErrorCode::malformed_predicate,
                  "contract '" + contract.id + "' has a clause without name or predicate");
    }
    bool waits = false;
    for (const auto& formal : clause.reads) {
      auto it = separateness.find(formal);
      if (it == separateness.end()) {
        throw Error(ErrorCode::malformed_predicate,
                    "clause '" + clause.name + "' reads unknown formal '" + formal + "'");
      }
      waits = waits || it->second;
    }
    (waits ? out.wait_clauses : out.assertions).push_back(i);
  }
  return out;
}

bool evaluate_wait_condition(const Contract& contract, const CompiledPrecondition& compiled,
                             const ClauseEnv& env) {
  for (std::size_t index : compiled.wait_clauses) {
    const Clause& clause = contract.require[index];
    env.restrict_to(&clause);
    if (!clause.holds(env)) {
      env.restrict_to(nullptr);
      return false;
    }
  }
  env.restrict_to(nullptr);
  return true;
}

std::optional<Exception> check_assertions(const Contract& contract,
                                          const CompiledPrecondition& compiled,
                                          const ClauseEnv& env) {
  for (std::size_t index : compiled.assertions) {
    const Clause& clause = contract.require[index];
    env.restrict_to(&clause);
    if (!clause.holds(env)) {
      env.restrict_to(nullptr);
      return Exception{ErrorCode::contract_violation,
                       "precondition '" + clause.name + "' of " + contract.id};
    }
  }
  env.restrict_to(nullptr);
  return std::nullopt;
}

std::optional<Exception> check_postcondition(const Contract& contract, const PostconditionEnv& env) {
  for (const PostClause& clause : contract.ensure) {
    if (!clause.holds(env)) {
      return Exception{ErrorCode::contract_violation,
                       "postcondition '" + clause.name + "' of " + contract.id +
                           " with Current{" + to_string(env.current()) + "}"};
    }
  }
  return std::nullopt;
}

std::string wait_clause_names(const Contract& contract, const CompiledPrecondition& compiled) {
  std::string out;
  for (std::size_t index : compiled.wait_clauses) {
    if (!out.empty()) out += "; ";
    out += contract.require[index].name;
  }
  return out;
}

}  // namespace scoop
