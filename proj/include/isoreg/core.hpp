#pragma once

#include <boost/rational.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "isoreg/dag.hpp"
#include "isoreg/error.hpp"

namespace isoreg {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}
inline double to_double(double x) { return x; }
inline double to_double(std::int64_t x) { return static_cast<double>(x); }

// Integer data f (values) and w (weights) over the vertices of an order.
struct WeightedFunction {
  std::vector<std::int64_t> values;
  std::vector<std::int64_t> weights;

  static WeightedFunction make(std::vector<std::int64_t> values,
                               std::vector<std::int64_t> weights) {
    if (values.size() != weights.size()) {
      fail(ErrorCode::kInvalidInput, "values and weights differ in length");
    }
    __int128 total = 0;
    std::int64_t magnitude = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (weights[i] < 0) {
        fail(ErrorCode::kInvalidInput,
             "negative weight at vertex " + std::to_string(i));
      }
      total += weights[i];
      magnitude = std::max(magnitude, values[i] < 0 ? -values[i] : values[i]);
    }
    if (total * std::max<std::int64_t>(magnitude, 1) >
        std::numeric_limits<std::int64_t>::max()) {
      fail(ErrorCode::kOverflow, "sum of weights times max |value| exceeds 64 bits");
    }
    return {std::move(values), std::move(weights)};
  }

  static WeightedFunction unweighted(std::vector<std::int64_t> values) {
    std::vector<std::int64_t> w(values.size(), 1);
    return make(std::move(values), std::move(w));
  }

  std::size_t size() const noexcept { return values.size(); }

  std::int64_t total_weight() const noexcept {
    std::int64_t s = 0;
    for (auto w : weights) s += w;
    return s;
  }
};

struct Metric {
  enum class Kind { kL0, kL1, kL2, kLp };

  Kind kind = Kind::kL2;
  double p = 2.0;
  double delta = 0.0;

  static Metric l0() { return {Kind::kL0, 0.0, 0.0}; }
  static Metric l1() { return {Kind::kL1, 1.0, 0.0}; }
  static Metric l2() { return {Kind::kL2, 2.0, 0.0}; }
  static Metric lp(double p, double delta) {
    if (!(p > 1.0) || !std::isfinite(p)) {
      fail(ErrorCode::kInvalidP, "p must be a finite real > 1");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
      fail(ErrorCode::kInvalidDelta, "delta must be a finite real > 0");
    }
    return {Kind::kLp, p, delta};
  }

  std::string name() const {
    switch (kind) {
      case Kind::kL0: return "l0";
      case Kind::kL1: return "l1";
      case Kind::kL2: return "l2";
      case Kind::kLp: return "lp";
    }
    return "?";
  }
};

struct Diagnostics {
  std::int64_t antichain_weight = 0;
  std::size_t n_hat = 0;
  std::size_t m_hat = 0;
  std::size_t steiner_count = 0;
  std::size_t subproblems = 0;
  std::size_t pruned = 0;
  std::size_t components = 0;
};

// values always holds the regression; exact additionally holds it as
// rationals for the metrics solved exactly (L0, L1, L2), and is empty for
// Lp approximations.
struct RegressionResult {
  std::vector<double> values;
  std::vector<Rational> exact;
  double error = 0.0;
  Diagnostics diagnostics;
};

// L0: total weight of changed vertices.  Finite p: sum of w |f - g|^p,
// without the outer root.
template <class T>
double regression_error(const WeightedFunction& wf, std::span<const T> values,
                        const Metric& metric) {
  if (values.size() != wf.size()) {
    fail(ErrorCode::kInvalidInput, "regression length mismatch");
  }
  long double total = 0;
  for (std::size_t v = 0; v < values.size(); ++v) {
    const auto w = static_cast<long double>(wf.weights[v]);
    if (metric.kind == Metric::Kind::kL0) {
      if (values[v] != T(wf.values[v])) total += w;
      continue;
    }
    long double diff;
    if constexpr (std::is_same_v<T, Rational>) {
      Rational d = values[v] - Rational(wf.values[v]);
      diff = static_cast<long double>(d.numerator()) /
             static_cast<long double>(d.denominator());
    } else {
      diff = static_cast<long double>(values[v]) - static_cast<long double>(wf.values[v]);
    }
    diff = std::fabs(diff);
    switch (metric.kind) {
      case Metric::Kind::kL1: total += w * diff; break;
      case Metric::Kind::kL2: total += w * diff * diff; break;
      default: total += w * std::pow(diff, static_cast<long double>(metric.p));
    }
  }
  return static_cast<double>(total);
}

template <class T>
double regression_error(const WeightedFunction& wf, const std::vector<T>& values,
                        const Metric& metric) {
  return regression_error(wf, std::span<const T>(values), metric);
}

// Edges (u,v) with values[u] > values[v].
template <class T>
std::vector<Edge> isotonic_check(const Dag& dag, std::span<const T> values) {
  if (values.size() != dag.size()) {
    fail(ErrorCode::kInvalidInput, "isotonic_check: length mismatch");
  }
  std::vector<Edge> bad;
  for (auto [u, v] : dag.edges()) {
    if (values[v] < values[u]) bad.emplace_back(u, v);
  }
  return bad;
}

template <class T>
std::vector<Edge> isotonic_check(const Dag& dag, const std::vector<T>& values) {
  return isotonic_check(dag, std::span<const T>(values));
}

// Marks vertices 0..keys.size()-1 of `reach` that are in no violating pair.
// Vertices of `reach` beyond keys.size() are pass-through (Steiner) nodes
// that carry no value but transmit the order.
inline std::vector<char> nonviolators(const Dag& reach,
                                      std::span<const std::int64_t> keys) {
  constexpr auto kLow = std::numeric_limits<std::int64_t>::min();
  constexpr auto kHigh = std::numeric_limits<std::int64_t>::max();
  const std::size_t real = keys.size();
  const std::size_t n = reach.size();
  std::vector<std::int64_t> below(n, kLow), above(n, kHigh);
  auto topo = reach.topological_order();
  for (VertexId v : topo) {
    for (VertexId u : reach.predecessors(v)) {
      std::int64_t through = below[u];
      if (u < real) through = std::max(through, keys[u]);
      below[v] = std::max(below[v], through);
    }
  }
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    VertexId v = *it;
    for (VertexId z : reach.successors(v)) {
      std::int64_t through = above[z];
      if (z < real) through = std::min(through, keys[z]);
      above[v] = std::min(above[v], through);
    }
  }
  std::vector<char> free(real);
  for (std::size_t v = 0; v < real; ++v) {
    free[v] = below[v] <= keys[v] && keys[v] <= above[v];
  }
  return free;
}

struct PruneResult {
  Dag subdag;                      // induced on kept vertices, local ids
  std::vector<VertexId> kept;      // local id -> original id
  std::vector<VertexId> removed;   // original ids fixed at f
  std::vector<std::int64_t> fixed; // f(removed[i])
};

// Removes every vertex v with max{f(u): u < v} <= f(v) <= min{f(z): v < z}.
// The subdag carries only induced edges, so a relation that ran through a
// removed vertex is not represented in it; solvers that need the full order
// on the kept vertices use `kept` against the original order instead.
inline PruneResult prune_nonviolating(const Dag& dag, const WeightedFunction& wf) {
  if (wf.size() != dag.size()) {
    fail(ErrorCode::kInvalidInput, "weighted function length differs from dag");
  }
  auto free = nonviolators(dag, wf.values);
  PruneResult out;
  std::vector<VertexId> local(dag.size(), static_cast<VertexId>(-1));
  for (VertexId v = 0; v < dag.size(); ++v) {
    if (free[v]) {
      out.removed.push_back(v);
      out.fixed.push_back(wf.values[v]);
    } else {
      local[v] = static_cast<VertexId>(out.kept.size());
      out.kept.push_back(v);
    }
  }
  std::vector<Edge> edges;
  for (auto [u, v] : dag.edges()) {
    if (!free[u] && !free[v]) edges.emplace_back(local[u], local[v]);
  }
  out.subdag = Dag::from_trusted_edges(out.kept.size(), std::move(edges));
  return out;
}

}  // namespace isoreg
