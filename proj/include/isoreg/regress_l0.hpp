#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <vector>

#include "isoreg/core.hpp"
#include "isoreg/flow.hpp"
#include "isoreg/order.hpp"

namespace isoreg {

// Extends keys|C to an isotonic function on vertices 0..keys.size()-1 of
// `reach` (later vertices are pass-through).  Members of C keep their key.
// Any other vertex v takes, in order of availability:
//   L(v)  = max key over members of C below v,
//   B(v)  = min of L(x) (or key(x) for x in C) over vertices x above v,
//   max(key(v), values already assigned below v).
// Throws NotAntichain when keys|C is not itself isotonic.
template <class T>
std::vector<T> extend_antichain(const Dag& reach, std::span<const T> keys,
                                std::span<const char> in_c) {
  const std::size_t real = keys.size();
  const std::size_t n = reach.size();
  if (in_c.size() != real || real > n) {
    fail(ErrorCode::kInvalidInput, "extend_antichain: size mismatch");
  }
  auto topo = reach.topological_order();

  std::vector<T> low(n), high(n), out(real);
  std::vector<char> has_low(n, 0), has_high(n, 0), done(real, 0);
  auto raise = [&](VertexId v, const T& x) {
    if (!has_low[v] || low[v] < x) {
      low[v] = x;
      has_low[v] = 1;
    }
  };
  auto lower = [&](VertexId v, const T& x) {
    if (!has_high[v] || x < high[v]) {
      high[v] = x;
      has_high[v] = 1;
    }
  };

  // low[v] = L(v) over strict predecessors.
  for (VertexId v : topo) {
    for (VertexId u : reach.predecessors(v)) {
      if (has_low[u]) raise(v, low[u]);
      if (u < real && in_c[u]) raise(v, keys[u]);
    }
    if (v < real && in_c[v] && has_low[v] && keys[v] < low[v]) {
      fail(ErrorCode::kNotAntichain, "values on the kept set are not isotonic");
    }
  }
  for (std::size_t v = 0; v < real; ++v) {
    if (in_c[v]) {
      out[v] = keys[v];
      done[v] = 1;
    } else if (has_low[v]) {
      out[v] = low[v];
      done[v] = 1;
    }
  }
  // high[v] = min anchored value over strict successors.
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    VertexId v = *it;
    for (VertexId x : reach.successors(v)) {
      if (has_high[x]) lower(v, high[x]);
      if (x < real && done[x]) lower(v, out[x]);
    }
  }
  for (std::size_t v = 0; v < real; ++v) {
    if (!done[v] && has_high[v]) {
      out[v] = high[v];
      done[v] = 2;
    }
  }
  // Remaining vertices have only remaining vertices above them.
  std::vector<T> carry(n);
  std::vector<char> has_carry(n, 0);
  for (VertexId v : topo) {
    bool any = false;
    T best{};
    for (VertexId u : reach.predecessors(v)) {
      if (has_carry[u] && (!any || best < carry[u])) {
        best = carry[u];
        any = true;
      }
    }
    if (v < real) {
      if (!done[v]) {
        out[v] = any && keys[v] < best ? best : keys[v];
        done[v] = 3;
      }
      if (!any || best < out[v]) best = out[v];
      any = true;
    }
    if (any) {
      carry[v] = best;
      has_carry[v] = 1;
    }
  }
  return out;
}

template <class T>
std::vector<T> extend_antichain(const Dag& reach, const std::vector<T>& keys,
                                const std::vector<char>& in_c) {
  return extend_antichain(reach, std::span<const T>(keys), std::span<const char>(in_c));
}

// Whole-dag form: C is a list of vertex ids.
inline std::vector<std::int64_t> extend_antichain(const Dag& dag, const WeightedFunction& wf,
                                                  std::span<const VertexId> c) {
  if (wf.size() != dag.size()) {
    fail(ErrorCode::kInvalidInput, "weighted function length differs from dag");
  }
  std::vector<char> in_c(dag.size(), 0);
  for (auto v : c) {
    if (v >= dag.size()) fail(ErrorCode::kInvalidInput, "antichain vertex out of range");
    in_c[v] = 1;
  }
  return extend_antichain(dag, std::span<const std::int64_t>(wf.values),
                          std::span<const char>(in_c));
}

// Statistics of one violator dag and its antichain.
struct SolveStats {
  std::size_t n_hat = 0;
  std::size_t m_hat = 0;
  std::size_t steiner_count = 0;
};

template <class Cap>
struct SubsetL0 {
  std::vector<std::int64_t> values;  // per subset position
  std::vector<char> in_c;            // kept unchanged
  Cap antichain_weight{0};           // over vertices not in `fixed`
  SolveStats stats;
};

// L0 regression of `keys` over `subset` of `order`, where subset positions
// flagged in `fixed` are known to stay unchanged and are left out of the
// violator dag.  `reach` is order.local_reach(subset).
template <class Cap>
SubsetL0<Cap> l0_on_subset(const Order& order, std::span<const VertexId> subset,
                           const Dag& reach, std::span<const std::int64_t> keys,
                           std::span<const Cap> weights, std::span<const char> fixed) {
  std::vector<VertexId> active_global;
  std::vector<std::uint32_t> active_pos;
  std::vector<std::int64_t> active_keys;
  std::vector<Cap> active_weights;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (!fixed.empty() && fixed[i]) continue;
    active_global.push_back(subset[i]);
    active_pos.push_back(static_cast<std::uint32_t>(i));
    active_keys.push_back(keys[i]);
    active_weights.push_back(weights[i]);
  }
  SubsetL0<Cap> out;
  out.in_c.assign(subset.size(), 0);
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (!fixed.empty() && fixed[i]) out.in_c[i] = 1;
  }
  if (!active_global.empty()) {
    auto vd = order.violators(active_global, active_keys);
    out.stats.n_hat = vd.vertex_count();
    out.stats.m_hat = vd.edges.size();
    out.stats.steiner_count = vd.steiner_count;
    if (vd.edges.empty()) {
      for (auto p : active_pos) out.in_c[p] = 1;
      for (auto w : active_weights) out.antichain_weight += w;
    } else {
      auto ac = max_weight_antichain(vd, std::span<const Cap>(active_weights));
      for (auto m : ac.members) out.in_c[active_pos[m]] = 1;
      out.antichain_weight = ac.weight;
    }
  }
  out.values = extend_antichain(reach, keys, std::span<const char>(out.in_c));
  return out;
}

// Fewest-weight-changed isotonic regression; the result keeps f on a
// maximum-weight set of mutually non-violating vertices.
inline RegressionResult l0_regress(const Order& order, const WeightedFunction& wf) {
  if (wf.size() != order.size()) {
    fail(ErrorCode::kInvalidInput, "weighted function length differs from order");
  }
  const std::size_t n = wf.size();
  auto fixed = nonviolators(order.reach(), wf.values);
  std::vector<VertexId> all(n);
  std::iota(all.begin(), all.end(), 0);
  auto solved = l0_on_subset<std::int64_t>(order, all, order.reach(), wf.values,
                                           wf.weights, fixed);
  RegressionResult result;
  result.values.assign(solved.values.begin(), solved.values.end());
  result.exact.assign(solved.values.begin(), solved.values.end());
  result.error = regression_error(wf, solved.values, Metric::l0());
  auto& d = result.diagnostics;
  d.antichain_weight = solved.antichain_weight;
  d.n_hat = solved.stats.n_hat;
  d.m_hat = solved.stats.m_hat;
  d.steiner_count = solved.stats.steiner_count;
  d.subproblems = 1;
  d.components = 1;
  std::int64_t pruned_weight = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (fixed[v]) {
      ++d.pruned;
      pruned_weight += wf.weights[v];
    }
  }
  const auto expected = wf.total_weight() - pruned_weight - solved.antichain_weight;
  if (static_cast<double>(expected) != result.error) {
    fail(ErrorCode::kExtractionMismatch, "L0 error differs from weight outside the antichain");
  }
  return result;
}

inline RegressionResult l0_regress(const Dag& dag, const WeightedFunction& wf) {
  return l0_regress(Order::from_dag(dag), wf);
}

}  // namespace isoreg
