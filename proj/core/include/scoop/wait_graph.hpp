#pragma once

#include <optional>
#include <set>
#include <vector>

#include "scoop/ids.hpp"

namespace scoop {

/// Processors waiting on regions held by other processors. An edge
/// waiter -> holder exists iff one of the waiter's pending requests needs a
/// region the holder currently holds.
class WaitForGraph {
 public:
  struct Edge {
    ProcessorId waiter;
    ProcessorId holder;
    RegionId region;

    auto operator<=>(const Edge&) const = default;
  };

  void add_node(ProcessorId p) { nodes_.insert(p); }
  void add_edge(ProcessorId waiter, ProcessorId holder, RegionId region);

  [[nodiscard]] const std::set<ProcessorId>& nodes() const { return nodes_; }
  [[nodiscard]] const std::set<Edge>& edges() const { return edges_; }
  [[nodiscard]] bool has_edge(ProcessorId from, ProcessorId to) const;

 private:
  std::set<ProcessorId> nodes_;
  std::set<Edge> edges_;
};

/// A cycle p0 -> p1 -> ... -> p(k-1) -> p0, or nullopt if the graph is
/// acyclic. The cycle starts at its smallest processor id.
std::optional<std::vector<ProcessorId>> detect_deadlock(const WaitForGraph& graph);

}  // namespace scoop
