#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace scoop::detail {

/// Adjacency lists over dense node indices.
struct ListGraph {
  std::vector<std::vector<std::size_t>> succ;

  [[nodiscard]] std::size_t size() const { return succ.size(); }
  [[nodiscard]] const std::vector<std::size_t>& successors(std::size_t i) const { return succ[i]; }
};

/// Adjacency bitmasks, one row per node (at most 64 nodes).
struct BitGraph {
  class Bits {
   public:
    struct iterator {
      std::uint64_t rest;
      std::size_t operator*() const { return static_cast<std::size_t>(std::countr_zero(rest)); }
      iterator& operator++() {
        rest &= rest - 1;
        return *this;
      }
      bool operator==(const iterator&) const = default;
    };
    explicit Bits(std::uint64_t b) : bits_(b) {}
    [[nodiscard]] iterator begin() const { return {bits_}; }
    [[nodiscard]] iterator end() const { return {0}; }

   private:
    std::uint64_t bits_;
  };

  const std::uint64_t* rows = nullptr;
  std::size_t count = 0;

  [[nodiscard]] std::size_t size() const { return count; }
  [[nodiscard]] Bits successors(std::size_t i) const { return Bits{rows[i]}; }
};

/// Iterative three-colour depth-first search. Reusable: buffers survive
/// between runs so repeated searches do not allocate.
template <class Graph>
class CycleSearch {
 public:
  using Cursor = decltype(std::declval<const Graph&>().successors(0).begin());

  /// True iff the graph has a cycle; the cycle is then available in order.
  bool run(const Graph& g) {
    const std::size_t n = g.size();
    colour_.assign(n, kWhite);
    cursor_.resize(n);
    path_.clear();
    cycle_.clear();
    for (std::size_t root = 0; root < n; ++root) {
      if (colour_[root] != kWhite) continue;
      enter(g, root);
      while (!path_.empty()) {
        const std::size_t node = path_.back();
        if (cursor_[node] == g.successors(node).end()) {
          colour_[node] = kBlack;
          path_.pop_back();
          continue;
        }
        const std::size_t to = *cursor_[node];
        ++cursor_[node];
        if (colour_[to] == kGrey) {
          auto start = std::find(path_.begin(), path_.end(), to);
          cycle_.assign(start, path_.end());
          return true;
        }
        if (colour_[to] == kWhite) enter(g, to);
      }
    }
    return false;
  }

  [[nodiscard]] const std::vector<std::size_t>& cycle() const { return cycle_; }

 private:
  static constexpr unsigned char kWhite = 0;
  static constexpr unsigned char kGrey = 1;
  static constexpr unsigned char kBlack = 2;

  void enter(const Graph& g, std::size_t node) {
    colour_[node] = kGrey;
    cursor_[node] = g.successors(node).begin();
    path_.push_back(node);
  }

  std::vector<unsigned char> colour_;
  std::vector<Cursor> cursor_;
  std::vector<std::size_t> path_;
  std::vector<std::size_t> cycle_;
};

}  // namespace scoop::detail
