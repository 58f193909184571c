#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "isoreg/dag.hpp"
#include "isoreg/error.hpp"
#include "isoreg/violator.hpp"

namespace isoreg {

template <class Cap>
class FlowNetwork {
 public:
  struct Arc {
    VertexId from;
    VertexId to;
    Cap lower;
    Cap capacity;
    Cap flow;
  };

  FlowNetwork(std::size_t nodes, VertexId source, VertexId sink)
      : nodes_(nodes), source_(source), sink_(sink) {}

  std::size_t add_arc(VertexId from, VertexId to, Cap lower, Cap capacity) {
    if (from >= nodes_ || to >= nodes_) fail(ErrorCode::kInvalidInput, "arc endpoint out of range");
    if (lower < 0 || capacity < lower) {
      fail(ErrorCode::kInvalidInput, "arc needs 0 <= lower <= capacity");
    }
    arcs_.push_back({from, to, lower, capacity, Cap{0}});
    return arcs_.size() - 1;
  }

  std::size_t node_count() const noexcept { return nodes_; }
  std::size_t arc_count() const noexcept { return arcs_.size(); }
  VertexId source() const noexcept { return source_; }
  VertexId sink() const noexcept { return sink_; }
  std::span<const Arc> arcs() const noexcept { return arcs_; }
  std::span<Arc> arcs() noexcept { return arcs_; }
  const Arc& arc(std::size_t id) const { return arcs_[id]; }
  Arc& arc(std::size_t id) { return arcs_[id]; }

  // Net flow leaving the source.
  Cap value() const {
    Cap total{0};
    for (const auto& a : arcs_) {
      if (a.from == source_) total += a.flow;
      if (a.to == source_) total -= a.flow;
    }
    return total;
  }

  bool bounds_hold() const {
    return std::all_of(arcs_.begin(), arcs_.end(), [](const Arc& a) {
      return a.lower <= a.flow && a.flow <= a.capacity;
    });
  }

  bool conserved() const {
    std::vector<Cap> excess(nodes_, Cap{0});
    for (const auto& a : arcs_) {
      excess[a.from] -= a.flow;
      excess[a.to] += a.flow;
    }
    for (std::size_t v = 0; v < nodes_; ++v) {
      if (v != source_ && v != sink_ && excess[v] != 0) return false;
    }
    return true;
  }

 private:
  std::size_t nodes_;
  VertexId source_;
  VertexId sink_;
  std::vector<Arc> arcs_;
};

// Blocking-flow max flow on a residual graph.  Edge 2i is the forward
// residual of the i-th added pair and 2i+1 its reverse.
template <class Cap>
class Dinic {
 public:
  explicit Dinic(std::size_t nodes) : nodes_(nodes) {}

  std::size_t add_edge(VertexId from, VertexId to, Cap forward, Cap backward = Cap{0}) {
    from_.push_back(from);
    to_.push_back(to);
    residual_.push_back(forward);
    from_.push_back(to);
    to_.push_back(from);
    residual_.push_back(backward);
    return from_.size() / 2 - 1;
  }

  Cap forward_residual(std::size_t pair) const { return residual_[2 * pair]; }
  Cap backward_residual(std::size_t pair) const { return residual_[2 * pair + 1]; }

  Cap max_flow(VertexId s, VertexId t) {
    build_adjacency();
    Cap total{0};
    if (s == t) return total;
    while (build_levels(s, t)) total += blocking_flow(s, t);
    return total;
  }

  std::size_t phases() const noexcept { return phases_; }

 private:
  void build_adjacency() {
    offset_.assign(nodes_ + 1, 0);
    for (auto u : from_) ++offset_[u + 1];
    std::partial_sum(offset_.begin(), offset_.end(), offset_.begin());
    adj_.resize(from_.size());
    auto fill = offset_;
    for (std::size_t e = 0; e < from_.size(); ++e) adj_[fill[from_[e]]++] = e;
  }

  bool build_levels(VertexId s, VertexId t) {
    level_.assign(nodes_, -1);
    queue_.clear();
    level_[s] = 0;
    queue_.push_back(s);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      VertexId u = queue_[head];
      for (auto i = offset_[u]; i < offset_[u + 1]; ++i) {
        auto e = adj_[i];
        if (residual_[e] > 0 && level_[to_[e]] < 0) {
          level_[to_[e]] = level_[u] + 1;
          queue_.push_back(to_[e]);
        }
      }
    }
    ++phases_;
    return level_[t] >= 0;
  }

  Cap blocking_flow(VertexId s, VertexId t) {
    cursor_.assign(offset_.begin(), offset_.end() - 1);
    path_.clear();
    Cap pushed{0};
    VertexId u = s;
    for (;;) {
      if (u == t) {
        Cap bottleneck = residual_[path_.front()];
        for (auto e : path_) bottleneck = std::min(bottleneck, residual_[e]);
        std::size_t first_full = path_.size();
        for (std::size_t i = 0; i < path_.size(); ++i) {
          auto e = path_[i];
          residual_[e] -= bottleneck;
          residual_[e ^ 1] += bottleneck;
          if (residual_[e] == 0 && first_full == path_.size()) first_full = i;
        }
        pushed += bottleneck;
        path_.resize(first_full);
        u = path_.empty() ? s : to_[path_.back()];
        continue;
      }
      bool advanced = false;
      for (auto& i = cursor_[u]; i < offset_[u + 1]; ++i) {
        auto e = adj_[i];
        if (residual_[e] > 0 && level_[to_[e]] == level_[u] + 1) {
          path_.push_back(e);
          u = to_[e];
          advanced = true;
          break;
        }
      }
      if (advanced) continue;
      if (u == s) return pushed;
      level_[u] = -1;
      auto e = path_.back();
      path_.pop_back();
      u = from_[e];
      ++cursor_[u];
    }
  }

  std::size_t nodes_;
  std::vector<VertexId> from_, to_;
  std::vector<Cap> residual_;
  std::vector<std::size_t> offset_, adj_, cursor_, path_;
  std::vector<int> level_;
  std::vector<VertexId> queue_;
  std::size_t phases_ = 0;
};

// Maximum from->to flow from zero, ignoring lower bounds; arc flows are
// overwritten with the result.
template <class Cap>
Cap max_flow(FlowNetwork<Cap>& net, VertexId from, VertexId to) {
  Dinic<Cap> solver(net.node_count());
  for (const auto& a : net.arcs()) solver.add_edge(a.from, a.to, a.capacity);
  Cap value = solver.max_flow(from, to);
  auto arcs = net.arcs();
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    arcs[i].flow = arcs[i].capacity - solver.forward_residual(i);
  }
  return value;
}

// Split-vertex network of a violator dag: node 2v is v_in, 2v+1 is v_out,
// then the source and the sink.
template <class Cap>
struct AntichainNetwork {
  FlowNetwork<Cap> net;
  std::size_t vertex_count = 0;
  std::size_t real_count = 0;
  Cap infinity{0};
  std::vector<std::size_t> source_arc, split_arc, sink_arc;

  static VertexId in(VertexId v) { return 2 * v; }
  static VertexId out(VertexId v) { return 2 * v + 1; }
};

template <class Cap>
AntichainNetwork<Cap> build_antichain_network(const ViolatorDag& vd,
                                              std::span<const Cap> weights) {
  if (weights.size() != vd.real_count) {
    fail(ErrorCode::kInvalidInput, "one weight per original vertex required");
  }
  Cap total{0};
  for (auto w : weights) {
    if (w < 0) fail(ErrorCode::kInvalidInput, "negative weight");
    total += w;
  }
  const auto n = static_cast<VertexId>(vd.vertex_count());
  AntichainNetwork<Cap> an{FlowNetwork<Cap>(2 * std::size_t{n} + 2, 2 * n, 2 * n + 1), n,
                           vd.real_count, total + 1, {}, {}, {}};
  const Cap inf = an.infinity;
  auto& net = an.net;
  an.source_arc.resize(n);
  an.split_arc.resize(n);
  an.sink_arc.resize(n);
  for (VertexId v = 0; v < n; ++v) {
    const Cap lower = v < vd.real_count ? weights[v] : Cap{0};
    an.source_arc[v] = net.add_arc(net.source(), an.in(v), Cap{0}, inf);
    an.split_arc[v] = net.add_arc(an.in(v), an.out(v), lower, inf);
    an.sink_arc[v] = net.add_arc(an.out(v), net.sink(), Cap{0}, inf);
  }
  for (auto [u, v] : vd.edges) net.add_arc(an.out(u), an.in(v), Cap{0}, inf);
  return an;
}

// Feasible flow routed vertex by vertex along s -> v_in -> v_out -> t, then
// reduced by a maximum t -> s flow in the residual network where an arc
// admits forward capacity - flow and backward flow - lower.
template <class Cap>
Cap min_flow_lower_bounds(AntichainNetwork<Cap>& an) {
  auto& net = an.net;
  for (auto& a : net.arcs()) a.flow = Cap{0};
  for (std::size_t v = 0; v < an.vertex_count; ++v) {
    const Cap w = net.arc(an.split_arc[v]).lower;
    net.arc(an.source_arc[v]).flow = w;
    net.arc(an.split_arc[v]).flow = w;
    net.arc(an.sink_arc[v]).flow = w;
  }
  Dinic<Cap> solver(net.node_count());
  for (const auto& a : net.arcs()) {
    solver.add_edge(a.from, a.to, a.capacity - a.flow, a.flow - a.lower);
  }
  solver.max_flow(net.sink(), net.source());
  auto arcs = net.arcs();
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    arcs[i].flow = arcs[i].lower + solver.backward_residual(i);
  }
  return net.value();
}

template <class Cap>
struct AntichainResult {
  std::vector<VertexId> members;
  Cap weight{0};
  Cap flow_value{0};
};

namespace detail {

// Nodes reachable from `start` along arcs with flow < capacity (forwards)
// or flow > lower (backwards).
template <class Cap>
std::vector<char> residual_reach(const FlowNetwork<Cap>& net, VertexId start) {
  const auto nodes = net.node_count();
  std::vector<std::size_t> offset(nodes + 1, 0);
  auto arcs = net.arcs();
  for (const auto& a : arcs) {
    ++offset[a.from + 1];
    ++offset[a.to + 1];
  }
  std::partial_sum(offset.begin(), offset.end(), offset.begin());
  std::vector<std::size_t> incident(offset.back());
  auto fill = offset;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    incident[fill[arcs[i].from]++] = i;
    incident[fill[arcs[i].to]++] = i;
  }
  std::vector<char> seen(nodes, 0);
  std::vector<VertexId> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    VertexId u = stack.back();
    stack.pop_back();
    for (auto k = offset[u]; k < offset[u + 1]; ++k) {
      const auto& a = arcs[incident[k]];
      VertexId next = u;
      if (a.from == u && a.flow < a.capacity) next = a.to;
      else if (a.to == u && a.flow > a.lower) next = a.from;
      if (next != u && !seen[next]) {
        seen[next] = 1;
        stack.push_back(next);
      }
    }
  }
  return seen;
}

// True when no member reaches another member along violator edges.
inline bool independent(const ViolatorDag& vd, std::span<const VertexId> members) {
  const auto n = vd.vertex_count();
  std::vector<std::size_t> offset(n + 1, 0);
  for (auto [u, v] : vd.edges) ++offset[u + 1];
  std::partial_sum(offset.begin(), offset.end(), offset.begin());
  std::vector<VertexId> succ(vd.edges.size());
  auto fill = offset;
  for (auto [u, v] : vd.edges) succ[fill[u]++] = v;

  std::vector<char> is_member(n, 0), seen(n, 0);
  std::vector<VertexId> stack;
  for (auto m : members) is_member[m] = 1;
  for (auto m : members) {
    for (auto k = offset[m]; k < offset[m + 1]; ++k) {
      if (!seen[succ[k]]) {
        seen[succ[k]] = 1;
        stack.push_back(succ[k]);
      }
    }
  }
  while (!stack.empty()) {
    VertexId u = stack.back();
    stack.pop_back();
    if (is_member[u]) return false;
    for (auto k = offset[u]; k < offset[u + 1]; ++k) {
      if (!seen[succ[k]]) {
        seen[succ[k]] = 1;
        stack.push_back(succ[k]);
      }
    }
  }
  return true;
}

}  // namespace detail

// Maximum-weight antichain among the original vertices of `vd`: the vertices
// whose split arc crosses the cut found by residual reachability from the
// sink after the minimum flow.  Every postcondition is verified.
template <class Cap>
AntichainResult<Cap> max_weight_antichain(const ViolatorDag& vd,
                                          std::span<const Cap> weights) {
  auto an = build_antichain_network(vd, weights);
  AntichainResult<Cap> result;
  result.flow_value = min_flow_lower_bounds(an);
  if (!an.net.bounds_hold() || !an.net.conserved()) {
    fail(ErrorCode::kExtractionMismatch, "minimum flow violates bounds or conservation");
  }
  auto sink_side = detail::residual_reach(an.net, an.net.sink());
  if (sink_side[an.net.source()]) {
    fail(ErrorCode::kExtractionMismatch, "source reachable in final residual network");
  }
  for (VertexId v = 0; v < vd.real_count; ++v) {
    if (sink_side[an.out(v)] && !sink_side[an.in(v)]) {
      result.members.push_back(v);
      result.weight += weights[v];
    }
  }
  if (result.weight != result.flow_value) {
    fail(ErrorCode::kExtractionMismatch, "antichain weight differs from minimum flow value");
  }
  if (!detail::independent(vd, result.members)) {
    fail(ErrorCode::kExtractionMismatch, "extracted vertex set is not an antichain");
  }
  return result;
}

template <class Cap>
AntichainResult<Cap> max_weight_antichain(const ViolatorDag& vd,
                                          const std::vector<Cap>& weights) {
  return max_weight_antichain(vd, std::span<const Cap>(weights));
}

}  // namespace isoreg
