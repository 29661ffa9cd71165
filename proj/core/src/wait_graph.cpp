#include "scoop/wait_graph.hpp"

#include "scoop/detail/cycle_search.hpp"

#include <algorithm>
#include <map>

namespace scoop {

void WaitForGraph::add_edge(ProcessorId waiter, ProcessorId holder, RegionId region) {
  nodes_.insert(waiter);
  nodes_.insert(holder);
  edges_.insert(Edge{waiter, holder, region});
}

bool WaitForGraph::has_edge(ProcessorId from, ProcessorId to) const {
  auto it = edges_.lower_bound(Edge{from, to, RegionId{0}});
  return it != edges_.end() && it->waiter == from && it->holder == to;
}

std::optional<std::vector<ProcessorId>> detect_deadlock(const WaitForGraph& graph) {
  std::vector<ProcessorId> ids(graph.nodes().begin(), graph.nodes().end());
  std::map<ProcessorId, std::size_t> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);

  detail::ListGraph dense;
  dense.succ.resize(ids.size());
  for (const auto& e : graph.edges()) {
    auto& out = dense.succ[index.at(e.waiter)];
    auto to = index.at(e.holder);
    // Edges are sorted by (waiter, holder), so parallel edges are adjacent.
    if (out.empty() || out.back() != to) out.push_back(to);
  }

  detail::CycleSearch<detail::ListGraph> search;
  if (!search.run(dense)) return std::nullopt;
  std::vector<ProcessorId> cycle;
  for (auto i : search.cycle()) cycle.push_back(ids[i]);
  std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
  return cycle;
}

}  // namespace scoop
