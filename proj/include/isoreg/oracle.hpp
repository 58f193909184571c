#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "isoreg/core.hpp"
#include "isoreg/violator.hpp"

// Exhaustive references for small instances.  Everything here is
// deliberately simple and independent of the flow machinery.

namespace isoreg {

struct OracleResult {
  Rational error{0};                 // exact for L0, L1, L2
  double approximate_error = 0.0;    // sum w |f - g|^p for every metric
  std::vector<Rational> assignment;  // one optimal isotonic assignment
};

namespace detail {

inline Rational oracle_term(const Metric& metric, std::int64_t w, const Rational& f,
                            const Rational& g) {
  Rational d = f > g ? f - g : g - f;
  switch (metric.kind) {
    case Metric::Kind::kL0: return d.numerator() == 0 ? Rational(0) : Rational(w);
    case Metric::Kind::kL1: return Rational(w) * d;
    case Metric::Kind::kL2: return Rational(w) * d * d;
    default: return Rational(0);
  }
}

inline double oracle_term_real(const Metric& metric, std::int64_t w, const Rational& f,
                               const Rational& g) {
  const double d = std::fabs(to_double(f) - to_double(g));
  if (metric.kind == Metric::Kind::kL0) return d == 0 ? 0.0 : static_cast<double>(w);
  return static_cast<double>(w) * std::pow(d, metric.p);
}

}  // namespace detail

// Minimum-error isotonic assignment with values from `grid`, by depth-first
// search along a topological order.  Refuses n > 10 or |grid|^n > 10^7.
inline OracleResult oracle_regress(const Dag& dag, const WeightedFunction& wf,
                                   const Metric& metric, std::vector<Rational> grid) {
  const std::size_t n = dag.size();
  if (wf.size() != n) fail(ErrorCode::kInvalidInput, "weighted function length differs from dag");
  if (n > 10) fail(ErrorCode::kTooLarge, "oracle_regress handles at most 10 vertices");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.empty() && n > 0) fail(ErrorCode::kInvalidInput, "oracle_regress needs a nonempty grid");
  double space = 1;
  for (std::size_t i = 0; i < n; ++i) space *= static_cast<double>(grid.size());
  if (space > 1e7) fail(ErrorCode::kTooLarge, "oracle_regress search space exceeds 10^7");

  const bool exact = metric.kind != Metric::Kind::kLp;
  auto topo = topological_order(dag);
  std::vector<std::size_t> choice(n, 0), best_choice(n, 0);
  std::optional<Rational> best_exact;
  double best_real = std::numeric_limits<double>::infinity();

  // Exact metrics compare rationals; Lp compares doubles.
  auto recurse = [&](auto&& self, std::size_t depth, const Rational& acc_exact,
                     double acc_real) -> void {
    if (exact ? (best_exact && !(acc_exact < *best_exact)) : acc_real >= best_real) return;
    if (depth == n) {
      bool improve = exact ? (!best_exact || acc_exact < *best_exact) : acc_real < best_real;
      if (improve) {
        best_exact = acc_exact;
        best_real = acc_real;
        best_choice = choice;
      }
      return;
    }
    const VertexId v = topo[depth];
    std::size_t start = 0;
    for (VertexId u : dag.predecessors(v)) start = std::max(start, choice[u]);
    const Rational f(wf.values[v]);
    for (std::size_t k = start; k < grid.size(); ++k) {
      choice[v] = k;
      if (exact) {
        self(self, depth + 1, acc_exact + detail::oracle_term(metric, wf.weights[v], f, grid[k]),
             0.0);
      } else {
        self(self, depth + 1, acc_exact,
             acc_real + detail::oracle_term_real(metric, wf.weights[v], f, grid[k]));
      }
    }
  };
  recurse(recurse, 0, Rational(0), 0.0);

  OracleResult out;
  for (std::size_t v = 0; v < n; ++v) out.assignment.push_back(n ? grid[best_choice[v]] : 0);
  if (exact) out.error = best_exact.value_or(Rational(0));
  out.approximate_error = 0;
  for (std::size_t v = 0; v < n; ++v) {
    out.approximate_error +=
        detail::oracle_term_real(metric, wf.weights[v], Rational(wf.values[v]), out.assignment[v]);
  }
  return out;
}

// Grid of the distinct values of f.
inline std::vector<Rational> value_grid(const WeightedFunction& wf) {
  std::vector<Rational> grid(wf.values.begin(), wf.values.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

// Maximum weight of a set of original vertices with no reachable pair.
inline std::int64_t oracle_antichain(const ViolatorDag& vd, std::span<const std::int64_t> weights) {
  const std::size_t n = vd.real_count;
  if (n > 20) fail(ErrorCode::kTooLarge, "oracle_antichain handles at most 20 vertices");
  if (weights.size() != n) fail(ErrorCode::kInvalidInput, "one weight per original vertex");
  auto reach = original_reachability(vd);
  std::vector<std::uint32_t> conflict(n, 0);
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = 0; v < n; ++v) {
      if (reach.reaches(u, v)) {
        conflict[u] |= 1U << v;
        conflict[v] |= 1U << u;
      }
    }
  }
  std::int64_t best = 0;
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    std::int64_t total = 0;
    bool ok = true;
    for (std::size_t v = 0; v < n && ok; ++v) {
      if (!(mask >> v & 1U)) continue;
      ok = (conflict[v] & mask) == 0;
      total += weights[v];
    }
    if (ok) best = std::max(best, total);
  }
  return best;
}

// Exact L2 regression from the upper/lower-set representation
//   f'(v) = max over upper sets U containing v of
//           min over lower sets L containing v of mean(f on U and L).
// Requires n <= 8 and positive weights.
inline std::vector<Rational> oracle_l2_maxmin(const Dag& dag, const WeightedFunction& wf) {
  const std::size_t n = dag.size();
  if (wf.size() != n) fail(ErrorCode::kInvalidInput, "weighted function length differs from dag");
  if (n > 8) fail(ErrorCode::kTooLarge, "oracle_l2_maxmin handles at most 8 vertices");
  for (auto w : wf.weights) {
    if (w <= 0) fail(ErrorCode::kInvalidInput, "oracle_l2_maxmin needs positive weights");
  }
  auto closure = transitive_closure(dag);
  std::vector<std::uint32_t> below(n, 0), above(n, 0);
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = 0; v < n; ++v) {
      if (closure.reaches(u, v)) {
        below[v] |= 1U << u;
        above[u] |= 1U << v;
      }
    }
  }
  std::vector<std::uint32_t> lowers, uppers;
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    bool lower = true, upper = true;
    for (std::size_t v = 0; v < n; ++v) {
      if (!(mask >> v & 1U)) continue;
      lower = lower && (below[v] & ~mask) == 0;
      upper = upper && (above[v] & ~mask) == 0;
    }
    if (lower) lowers.push_back(mask);
    if (upper) uppers.push_back(mask);
  }
  auto mean = [&](std::uint32_t mask) {
    std::int64_t num = 0, den = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (mask >> v & 1U) {
        num += wf.weights[v] * wf.values[v];
        den += wf.weights[v];
      }
    }
    return Rational(num, den);
  };
  std::vector<Rational> out(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::optional<Rational> best;
    for (auto up : uppers) {
      if (!(up >> v & 1U)) continue;
      std::optional<Rational> worst;
      for (auto lo : lowers) {
        if (!(lo >> v & 1U)) continue;
        auto m = mean(up & lo);
        if (!worst || m < *worst) worst = m;
      }
      if (!best || *best < *worst) best = worst;
    }
    out[v] = *best;
  }
  return out;
}

}  // namespace isoreg
