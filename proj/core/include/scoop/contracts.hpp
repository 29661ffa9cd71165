#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scoop/model.hpp"
#include "scoop/value.hpp"

namespace scoop {

/// Name under which a clause refers to the routine's target object.
inline constexpr std::string_view kCurrent = "Current";

/// Read access to object state, restricted to some set of regions.
class StateView {
 public:
  virtual ~StateView() = default;
  /// Throws Error(illegal_dereference) if ref's region is not readable.
  [[nodiscard]] virtual const ObjectState& read(const SeparateRef& ref) const = 0;
};

/// Deep copy of the objects of a set of regions, taken at application start
/// so that postconditions can refer to entry values.
class Snapshot final : public StateView {
 public:
  void add_region(RegionId region) { regions_.insert(region); }
  void add(ObjectId id, ObjectState state) { objects_.insert_or_assign(id, std::move(state)); }
  [[nodiscard]] const ObjectState& read(const SeparateRef& ref) const override;
  [[nodiscard]] const std::set<RegionId>& regions() const { return regions_; }

 private:
  std::set<RegionId> regions_;
  std::map<ObjectId, ObjectState> objects_;
};

struct Clause;

/// What a precondition clause sees: the target, the actual arguments by
/// formal name, and whatever the view allows it to dereference. A clause may
/// only touch the formals it declared in `reads`.
class ClauseEnv {
 public:
  ClauseEnv(SeparateRef current, std::span<const std::string> formals,
            std::span<const Value> args, const StateView& state);

  [[nodiscard]] const ObjectState& current() const;
  [[nodiscard]] const Value& arg(std::string_view formal) const;
  /// Object denoted by a reference-valued formal.
  [[nodiscard]] const ObjectState& separate(std::string_view formal) const;
  [[nodiscard]] const ObjectState& read(const SeparateRef& ref) const { return state_.read(ref); }

  void restrict_to(const Clause* clause) const { clause_ = clause; }

 protected:
  void require_declared(std::string_view formal) const;

  SeparateRef current_;
  std::span<const std::string> formals_;
  std::span<const Value> args_;
  const StateView& state_;
  mutable const Clause* clause_ = nullptr;
};

class PostconditionEnv : public ClauseEnv {
 public:
  PostconditionEnv(SeparateRef current, std::span<const std::string> formals,
                   std::span<const Value> args, const StateView& now, const StateView& old,
                   Value result);

  [[nodiscard]] const ObjectState& old_current() const { return old_.read(current_); }
  [[nodiscard]] const ObjectState& old(std::string_view formal) const;
  [[nodiscard]] const Value& result() const { return result_; }

 private:
  const StateView& old_;
  Value result_;
};

struct Clause {
  std::string name;
  std::vector<std::string> reads;  // formals (or kCurrent) the predicate dereferences
  std::function<bool(const ClauseEnv&)> holds;
};

struct PostClause {
  std::string name;
  std::function<bool(const PostconditionEnv&)> holds;
};

struct Contract {
  std::string id;
  std::vector<Clause> require;
  std::vector<PostClause> ensure;
};

/// Per-formal separateness of one call, plus kCurrent for the target.
using Separateness = std::map<std::string, bool, std::less<>>;

/// Precondition split by clause: any clause reading a separate formal waits,
/// everything else is asserted.
struct CompiledPrecondition {
  std::vector<std::size_t> wait_clauses;
  std::vector<std::size_t> assertions;

  [[nodiscard]] bool trivial_wait() const { return wait_clauses.empty(); }
};

CompiledPrecondition compile_precondition(const Contract& contract, const Separateness& separateness);

/// Pure. Throws Error(illegal_dereference) if a clause leaves the held state.
bool evaluate_wait_condition(const Contract& contract, const CompiledPrecondition& compiled,
                             const ClauseEnv& env);

/// First failing assertion clause, as a ContractViolation.
std::optional<Exception> check_assertions(const Contract& contract,
                                          const CompiledPrecondition& compiled,
                                          const ClauseEnv& env);

std::optional<Exception> check_postcondition(const Contract& contract, const PostconditionEnv& env);

/// "a; b; c" over the wait clauses, in declaration order.
std::string wait_clause_names(const Contract& contract, const CompiledPrecondition& compiled);

}  // namespace scoop
