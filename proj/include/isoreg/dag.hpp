#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "isoreg/error.hpp"

namespace isoreg {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

// Kahn's algorithm with a FIFO seeded in id order, so the output is
// deterministic.  Throws CycleDetected with one witness cycle.
inline std::vector<VertexId> topological_sort(std::size_t n,
                                              std::span<const Edge> edges) {
  std::vector<std::uint32_t> indegree(n, 0);
  std::vector<std::uint32_t> offset(n + 1, 0);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) {
      fail(ErrorCode::kInvalidInput, "edge endpoint out of range");
    }
    ++offset[u + 1];
    ++indegree[v];
  }
  std::partial_sum(offset.begin(), offset.end(), offset.begin());
  std::vector<VertexId> succ(edges.size());
  {
    auto fill = offset;
    for (auto [u, v] : edges) succ[fill[u]++] = v;
  }

  std::vector<VertexId> order;
  order.reserve(n);
  for (VertexId v = 0; v < n; ++v) {
    if (indegree[v] == 0) order.push_back(v);
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    VertexId u = order[head];
    for (auto i = offset[u]; i < offset[u + 1]; ++i) {
      if (--indegree[succ[i]] == 0) order.push_back(succ[i]);
    }
  }
  if (order.size() == n) return order;

  // Every leftover vertex keeps a leftover predecessor; walk back until a
  // vertex repeats.
  std::vector<VertexId> pred(n, static_cast<VertexId>(n));
  for (auto [u, v] : edges) {
    if (indegree[u] > 0 && indegree[v] > 0) pred[v] = u;
  }
  VertexId start = 0;
  while (indegree[start] == 0) ++start;
  std::vector<int> seen_at(n, -1);
  std::vector<VertexId> walk;
  VertexId v = start;
  while (seen_at[v] < 0) {
    seen_at[v] = static_cast<int>(walk.size());
    walk.push_back(v);
    v = pred[v];
  }
  std::vector<VertexId> cycle(walk.begin() + seen_at[v], walk.end());
  std::reverse(cycle.begin(), cycle.end());
  throw CycleDetected(std::move(cycle));
}

// Validated directed acyclic graph in compressed adjacency form.  Immutable.
class Dag {
 public:
  Dag() = default;

  // Rejects self-loops, duplicate edges, out-of-range ids and cycles.
  static Dag from_edges(std::size_t n, std::vector<Edge> edges) {
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) {
        fail(ErrorCode::kInvalidInput,
             "edge (" + std::to_string(u) + "," + std::to_string(v) +
                 ") references a vertex >= n=" + std::to_string(n));
      }
      if (u == v) {
        fail(ErrorCode::kInvalidInput, "self-loop at " + std::to_string(u));
      }
    }
    {
      auto sorted = edges;
      std::sort(sorted.begin(), sorted.end());
      auto dup = std::adjacent_find(sorted.begin(), sorted.end());
      if (dup != sorted.end()) {
        fail(ErrorCode::kInvalidInput,
             "duplicate edge (" + std::to_string(dup->first) + "," +
                 std::to_string(dup->second) + ")");
      }
    }
    Dag dag;
    dag.topo_ = topological_sort(n, edges);
    dag.n_ = n;
    dag.build_adjacency(std::move(edges));
    return dag;
  }

  // Skips validation; the caller guarantees a simple acyclic edge list.
  static Dag from_trusted_edges(std::size_t n, std::vector<Edge> edges) {
    Dag dag;
    dag.topo_ = topological_sort(n, edges);
    dag.n_ = n;
    dag.build_adjacency(std::move(edges));
    return dag;
  }

  static Dag chain(std::size_t n) {
    std::vector<Edge> edges;
    for (VertexId v = 1; v < n; ++v) edges.emplace_back(v - 1, v);
    return from_trusted_edges(n, std::move(edges));
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const VertexId> topological_order() const noexcept { return topo_; }

  std::span<const VertexId> successors(VertexId v) const noexcept {
    return {succ_.data() + succ_off_[v], succ_off_[v + 1] - succ_off_[v]};
  }
  std::span<const VertexId> predecessors(VertexId v) const noexcept {
    return {pred_.data() + pred_off_[v], pred_off_[v + 1] - pred_off_[v]};
  }

 private:
  void build_adjacency(std::vector<Edge> edges) {
    edges_ = std::move(edges);
    succ_off_.assign(n_ + 1, 0);
    pred_off_.assign(n_ + 1, 0);
    for (auto [u, v] : edges_) {
      ++succ_off_[u + 1];
      ++pred_off_[v + 1];
    }
    std::partial_sum(succ_off_.begin(), succ_off_.end(), succ_off_.begin());
    std::partial_sum(pred_off_.begin(), pred_off_.end(), pred_off_.begin());
    succ_.resize(edges_.size());
    pred_.resize(edges_.size());
    auto s = succ_off_;
    auto p = pred_off_;
    for (auto [u, v] : edges_) {
      succ_[s[u]++] = v;
      pred_[p[v]++] = u;
    }
  }

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<VertexId> topo_;
  std::vector<std::size_t> succ_off_{0}, pred_off_{0};
  std::vector<VertexId> succ_, pred_;
};

inline std::vector<VertexId> topological_order(const Dag& dag) {
  auto order = dag.topological_order();
  return {order.begin(), order.end()};
}

// Component label per vertex, labels dense in first-appearance order.
inline std::vector<std::uint32_t> weak_components(const Dag& dag,
                                                  std::uint32_t* count = nullptr) {
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> label(dag.size(), kUnset);
  std::uint32_t next = 0;
  std::vector<VertexId> stack;
  for (VertexId root = 0; root < dag.size(); ++root) {
    if (label[root] != kUnset) continue;
    label[root] = next;
    stack.push_back(root);
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      for (auto nbrs : {dag.successors(u), dag.predecessors(u)}) {
        for (VertexId v : nbrs) {
          if (label[v] == kUnset) {
            label[v] = next;
            stack.push_back(v);
          }
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

// Square bit matrix; row u holds the strict successors of u.
class Reachability {
 public:
  Reachability() = default;
  explicit Reachability(std::size_t n)
      : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

  std::size_t size() const noexcept { return n_; }
  std::size_t words_per_row() const noexcept { return words_; }

  bool reaches(VertexId u, VertexId v) const noexcept {
    return (bits_[u * words_ + v / 64] >> (v % 64)) & 1U;
  }
  void set(VertexId u, VertexId v) noexcept {
    bits_[u * words_ + v / 64] |= std::uint64_t{1} << (v % 64);
  }
  std::span<const std::uint64_t> row(VertexId u) const noexcept {
    return {bits_.data() + u * words_, words_};
  }
  std::span<std::uint64_t> row(VertexId u) noexcept {
    return {bits_.data() + u * words_, words_};
  }

  std::size_t pair_count() const noexcept {
    std::size_t total = 0;
    for (auto w : bits_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }

  std::vector<Edge> pairs() const {
    std::vector<Edge> out;
    for (VertexId u = 0; u < n_; ++u) {
      auto r = row(u);
      for (std::size_t w = 0; w < words_; ++w) {
        for (auto bits = r[w]; bits; bits &= bits - 1) {
          out.emplace_back(u, static_cast<VertexId>(w * 64 + std::countr_zero(bits)));
        }
      }
    }
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Successor sets accumulated in reverse topological order: O(n m / 64).
inline Reachability transitive_closure(const Dag& dag) {
  Reachability closure(dag.size());
  auto topo = dag.topological_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    VertexId u = *it;
    auto row = closure.row(u);
    for (VertexId v : dag.successors(u)) {
      closure.set(u, v);
      auto other = closure.row(v);
      for (std::size_t w = 0; w < row.size(); ++w) row[w] |= other[w];
    }
  }
  return closure;
}

}  // namespace isoreg
