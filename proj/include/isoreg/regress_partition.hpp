#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "isoreg/core.hpp"
#include "isoreg/order.hpp"
#include "isoreg/regress_l0.hpp"

namespace isoreg {

// Weighted p-mean: the x minimizing sum w |f - x|^p.  p = 1 gives the lower
// weighted median, p = 2 the weighted mean; other p are found by bisection
// to 2^-40 of the value range.
inline double weighted_p_mean(std::span<const double> values, std::span<const double> weights,
                              double p) {
  if (values.empty() || values.size() != weights.size()) {
    fail(ErrorCode::kInvalidInput, "weighted_p_mean: empty or mismatched input");
  }
  if (!(p >= 1.0)) fail(ErrorCode::kInvalidP, "weighted_p_mean needs p >= 1");
  double total = 0;
  for (auto w : weights) total += w;
  if (!(total > 0)) fail(ErrorCode::kInvalidInput, "weighted_p_mean: zero total weight");
  if (p == 1.0) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    double acc = 0;
    for (auto i : idx) {
      acc += weights[i];
      if (2 * acc >= total) return values[i];
    }
    return values[idx.back()];
  }
  if (p == 2.0) {
    double s = 0;
    for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * values[i];
    return s / total;
  }
  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it, hi = *hi_it;
  const double eps = (hi - lo) * std::ldexp(1.0, -40);
  auto slope = [&](double x) {
    double s = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      double d = x - values[i];
      s += weights[i] * (d < 0 ? -1.0 : 1.0) * std::pow(std::fabs(d), p - 1);
    }
    return s;
  };
  while (hi - lo > eps) {
    double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    (slope(mid) < 0 ? lo : hi) = mid;
  }
  return lo + (hi - lo) / 2;
}

struct PartitionOptions {
  // Lp derivative weights are scaled so the largest in a subproblem becomes
  // this integer.
  double weight_scale = 1048576.0;
};

namespace detail {

// Binary isotonic step through violator dags of `order`; checks that the
// returned split never puts a 1 below a 0.
template <class Cap>
struct FlowSplitter {
  const Order& order;
  SolveStats totals;

  std::vector<std::int64_t> operator()(std::span<const VertexId> subset,
                                       std::span<const std::int64_t> labels,
                                       std::span<const Cap> weights) {
    auto reach = order.local_reach(subset);
    auto r = l0_on_subset<Cap>(order, subset, *reach, labels, weights, {});
    totals.n_hat += r.stats.n_hat;
    totals.m_hat += r.stats.m_hat;
    totals.steiner_count += r.stats.steiner_count;
    auto ok = nonviolators(*reach, r.values);
    if (std::find(ok.begin(), ok.end(), 0) != ok.end()) {
      fail(ErrorCode::kExtractionMismatch, "binary split places an upper vertex below a lower one");
    }
    return std::move(r.values);
  }
};

// Assigns grid indices in [lo, hi] to `subset`.  rule(subset, mid, labels,
// weights) states the binary problem separating grid[mid] from grid[mid+1].
template <class Cap, class Rule, class Splitter>
void partition(std::vector<VertexId> subset, std::int64_t lo, std::int64_t hi, Rule& rule,
               Splitter& split, std::vector<std::int64_t>& index, std::size_t& subproblems) {
  if (subset.empty()) return;
  if (lo == hi) {
    for (auto v : subset) index[v] = lo;
    return;
  }
  const std::int64_t mid = lo + (hi - lo) / 2;
  std::vector<std::int64_t> labels(subset.size());
  std::vector<Cap> weights(subset.size());
  rule(std::span<const VertexId>(subset), mid, std::span<std::int64_t>(labels),
       std::span<Cap>(weights));
  ++subproblems;
  if (subset.size() > 1) {
    labels = split(std::span<const VertexId>(subset), std::span<const std::int64_t>(labels),
                   std::span<const Cap>(weights));
  }
  std::vector<VertexId> lower, upper;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    (labels[i] == 0 ? lower : upper).push_back(subset[i]);
  }
  subset.clear();
  subset.shrink_to_fit();
  partition<Cap>(std::move(lower), lo, mid, rule, split, index, subproblems);
  partition<Cap>(std::move(upper), mid + 1, hi, rule, split, index, subproblems);
}

// Pulls values of non-fixed vertices into [max f below, min f above] over the
// fixed vertices, which keeps the result isotonic against them.
template <class T>
void clamp_to_fixed(const Dag& reach, std::span<const std::int64_t> keys,
                    std::span<const char> fixed, std::vector<T>& values) {
  constexpr auto kLow = std::numeric_limits<std::int64_t>::min();
  constexpr auto kHigh = std::numeric_limits<std::int64_t>::max();
  const std::size_t real = keys.size();
  std::vector<std::int64_t> below(reach.size(), kLow), above(reach.size(), kHigh);
  auto topo = reach.topological_order();
  for (VertexId v : topo) {
    for (VertexId u : reach.predecessors(v)) {
      below[v] = std::max(below[v], below[u]);
      if (u < real && fixed[u]) below[v] = std::max(below[v], keys[u]);
    }
  }
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    for (VertexId z : reach.successors(*it)) {
      above[*it] = std::min(above[*it], above[z]);
      if (z < real && fixed[z]) above[*it] = std::min(above[*it], keys[z]);
    }
  }
  for (std::size_t v = 0; v < real; ++v) {
    if (fixed[v]) continue;
    if (below[v] != kLow && values[v] < T(below[v])) values[v] = T(below[v]);
    if (above[v] != kHigh && T(above[v]) < values[v]) values[v] = T(above[v]);
  }
}

struct Prepared {
  std::vector<char> fixed;
  std::vector<VertexId> kept;
};

inline Prepared prepare(const Order& order, const WeightedFunction& wf) {
  if (wf.size() != order.size()) {
    fail(ErrorCode::kInvalidInput, "weighted function length differs from order");
  }
  Prepared p;
  p.fixed = nonviolators(order.reach(), wf.values);
  for (VertexId v = 0; v < wf.size(); ++v) {
    if (!p.fixed[v]) p.kept.push_back(v);
  }
  return p;
}

inline void fill_diagnostics(Diagnostics& d, const Prepared& p, const SolveStats& s,
                             std::size_t subproblems) {
  d.n_hat = s.n_hat;
  d.m_hat = s.m_hat;
  d.steiner_count = s.steiner_count;
  d.subproblems = subproblems;
  d.pruned = p.fixed.size() - p.kept.size();
  d.components = 1;
}

}  // namespace detail

// Isotonic 0/1 labelling of minimum changed weight.
inline std::vector<std::int64_t> binary_l1(const Order& order,
                                           std::span<const std::int64_t> labels,
                                           std::span<const std::int64_t> weights) {
  if (labels.size() != order.size() || weights.size() != order.size()) {
    fail(ErrorCode::kInvalidInput, "one label and one weight per vertex required");
  }
  for (auto l : labels) {
    if (l != 0 && l != 1) fail(ErrorCode::kInvalidInput, "labels must be 0 or 1");
  }
  for (auto w : weights) {
    if (w < 0) fail(ErrorCode::kInvalidInput, "negative weight");
  }
  std::vector<VertexId> all(order.size());
  std::iota(all.begin(), all.end(), 0);
  return l0_on_subset<std::int64_t>(order, all, order.reach(), labels, weights, {}).values;
}

// Exact L1 regression.  Values are drawn from f and split at the median of
// the remaining distinct values in each step.
template <class Splitter>
RegressionResult l1_partition(const Dag& reach, const WeightedFunction& wf,
                              const detail::Prepared& prep, Splitter& split,
                              std::size_t& subproblems) {
  std::vector<std::int64_t> grid;
  for (auto v : prep.kept) grid.push_back(wf.values[v]);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  auto rule = [&](std::span<const VertexId> subset, std::int64_t mid,
                  std::span<std::int64_t> labels, std::span<std::int64_t> weights) {
    for (std::size_t i = 0; i < subset.size(); ++i) {
      labels[i] = wf.values[subset[i]] <= grid[mid] ? 0 : 1;
      weights[i] = wf.weights[subset[i]];
    }
  };
  std::vector<std::int64_t> index(wf.size(), 0);
  if (!grid.empty()) {
    detail::partition<std::int64_t>(prep.kept, 0, static_cast<std::int64_t>(grid.size()) - 1,
                                    rule, split, index, subproblems);
  }
  std::vector<std::int64_t> values = wf.values;
  for (auto v : prep.kept) values[v] = grid[index[v]];
  detail::clamp_to_fixed(reach, std::span<const std::int64_t>(wf.values),
                         std::span<const char>(prep.fixed), values);
  RegressionResult result;
  result.values.assign(values.begin(), values.end());
  result.exact.assign(values.begin(), values.end());
  result.error = regression_error(wf, values, Metric::l1());
  return result;
}

inline RegressionResult l1_regress(const Order& order, const WeightedFunction& wf) {
  auto prep = detail::prepare(order, wf);
  detail::FlowSplitter<std::int64_t> split{order, {}};
  std::size_t subproblems = 0;
  auto result = l1_partition(order.reach(), wf, prep, split, subproblems);
  detail::fill_diagnostics(result.diagnostics, prep, split.totals, subproblems);
  return result;
}

// Lp regression on the grid f_min + i delta: every value is within delta/2
// of an optimal one, up to the rounding of derivative weights to integers.
inline RegressionResult lp_approx(const Order& order, const WeightedFunction& wf, double p,
                                  double delta, const PartitionOptions& options = {}) {
  const auto metric = Metric::lp(p, delta);
  if (!(options.weight_scale >= 1.0) || options.weight_scale > 0x1p52) {
    fail(ErrorCode::kInvalidInput, "weight scale must lie in [1, 2^52]");
  }
  auto prep = detail::prepare(order, wf);
  std::vector<double> values(wf.values.begin(), wf.values.end());
  detail::FlowSplitter<std::int64_t> split{order, {}};
  std::size_t subproblems = 0;
  if (!prep.kept.empty()) {
    std::int64_t fmin = std::numeric_limits<std::int64_t>::max();
    std::int64_t fmax = std::numeric_limits<std::int64_t>::min();
    for (auto v : prep.kept) {
      fmin = std::min(fmin, wf.values[v]);
      fmax = std::max(fmax, wf.values[v]);
    }
    const double range = static_cast<double>(fmax) - static_cast<double>(fmin);
    const double steps = std::ceil(range / delta - 1e-9);
    if (!(steps < 0x1p62)) fail(ErrorCode::kInvalidDelta, "delta too small for the value range");
    const auto top = static_cast<std::int64_t>(std::max(steps, 0.0));
    const double base = static_cast<double>(fmin);

    std::vector<double> slope;
    auto rule = [&](std::span<const VertexId> subset, std::int64_t mid,
                    std::span<std::int64_t> labels, std::span<std::int64_t> weights) {
      const double m = base + (static_cast<double>(mid) + 0.5) * delta;
      slope.resize(subset.size());
      double largest = 0;
      for (std::size_t i = 0; i < subset.size(); ++i) {
        const double d = m - static_cast<double>(wf.values[subset[i]]);
        slope[i] = static_cast<double>(wf.weights[subset[i]]) * p *
                   std::pow(std::fabs(d), p - 1) * (d < 0 ? -1.0 : 1.0);
        largest = std::max(largest, std::fabs(slope[i]));
      }
      for (std::size_t i = 0; i < subset.size(); ++i) {
        labels[i] = slope[i] < 0 ? 1 : 0;
        weights[i] = largest > 0
                         ? std::llround(std::fabs(slope[i]) / largest * options.weight_scale)
                         : 0;
      }
    };
    std::vector<std::int64_t> index(wf.size(), 0);
    detail::partition<std::int64_t>(prep.kept, 0, top, rule, split, index, subproblems);
    for (auto v : prep.kept) values[v] = base + static_cast<double>(index[v]) * delta;
    detail::clamp_to_fixed(order.reach(), std::span<const std::int64_t>(wf.values),
                           std::span<const char>(prep.fixed), values);
  }
  RegressionResult result;
  result.values = values;
  result.error = regression_error(wf, values, metric);
  detail::fill_diagnostics(result.diagnostics, prep, split.totals, subproblems);
  return result;
}

namespace detail {

// Exact L2 on the kept set: partition on the grid of step 1/(4 S^2) with
// integer derivative weights, then replace each cluster of grid values by
// the weighted mean of its vertices.
template <class Cap>
RegressionResult l2_exact_with(const Order& order, const WeightedFunction& wf,
                               const Prepared& prep, __int128 scale, std::int64_t fmin,
                               std::int64_t top) {
  FlowSplitter<Cap> split{order, {}};
  std::size_t subproblems = 0;
  auto rule = [&](std::span<const VertexId> subset, std::int64_t mid,
                  std::span<std::int64_t> labels, std::span<Cap> weights) {
    for (std::size_t i = 0; i < subset.size(); ++i) {
      const auto v = subset[i];
      const __int128 slope =
          static_cast<__int128>(wf.weights[v]) *
          (scale * (static_cast<__int128>(fmin) - wf.values[v]) + 2 * static_cast<__int128>(mid) + 1);
      labels[i] = slope < 0 ? 1 : 0;
      weights[i] = static_cast<Cap>(slope < 0 ? -slope : slope);
    }
  };
  std::vector<std::int64_t> index(wf.size(), 0);
  partition<Cap>(prep.kept, 0, top, rule, split, index, subproblems);

  std::vector<VertexId> heavy;
  for (auto v : prep.kept) {
    if (wf.weights[v] > 0) heavy.push_back(v);
  }
  std::stable_sort(heavy.begin(), heavy.end(),
                   [&](auto a, auto b) { return index[a] < index[b]; });
  // Means on positive-weight kept vertices and f on fixed ones form an
  // isotonic set; every other vertex is extended from it.
  std::vector<Rational> keys(wf.values.begin(), wf.values.end());
  std::vector<char> in_c(prep.fixed.begin(), prep.fixed.end());
  for (std::size_t a = 0; a < heavy.size();) {
    std::size_t b = a + 1;
    while (b < heavy.size() && index[heavy[b]] - index[heavy[b - 1]] <= 2) ++b;
    std::int64_t num = 0, den = 0;
    for (auto i = a; i < b; ++i) {
      num += wf.weights[heavy[i]] * wf.values[heavy[i]];
      den += wf.weights[heavy[i]];
    }
    const Rational mean(num, den);
    for (auto i = a; i < b; ++i) {
      keys[heavy[i]] = mean;
      in_c[heavy[i]] = 1;
    }
    a = b;
  }
  auto exact = extend_antichain(order.reach(), std::span<const Rational>(keys),
                                std::span<const char>(in_c));

  RegressionResult result;
  result.values.reserve(exact.size());
  for (const auto& r : exact) result.values.push_back(to_double(r));
  result.error = regression_error(wf, exact, Metric::l2());
  result.exact = std::move(exact);
  fill_diagnostics(result.diagnostics, prep, split.totals, subproblems);
  return result;
}

}  // namespace detail

// Exact weighted L2 isotonic regression with rational values.  Capacities
// switch to 128 bits when 64 would not hold the derivative weights; beyond
// that Overflow is thrown.
inline RegressionResult l2_exact(const Order& order, const WeightedFunction& wf) {
  auto prep = detail::prepare(order, wf);
  __int128 total = 0;
  std::int64_t fmin = std::numeric_limits<std::int64_t>::max();
  std::int64_t fmax = std::numeric_limits<std::int64_t>::min();
  for (auto v : prep.kept) {
    total += wf.weights[v];
    fmin = std::min(fmin, wf.values[v]);
    fmax = std::max(fmax, wf.values[v]);
  }
  if (prep.kept.empty() || total == 0) {
    // Nothing to move, or only zero weights: extend f from the fixed set.
    std::vector<Rational> keys(wf.values.begin(), wf.values.end());
    std::vector<char> in_c(prep.fixed.begin(), prep.fixed.end());
    auto exact = extend_antichain(order.reach(), std::span<const Rational>(keys),
                                  std::span<const char>(in_c));
    RegressionResult result;
    for (const auto& r : exact) result.values.push_back(to_double(r));
    result.error = regression_error(wf, exact, Metric::l2());
    result.exact = std::move(exact);
    detail::fill_diagnostics(result.diagnostics, prep, {}, 0);
    return result;
  }
  constexpr __int128 kLimit64 = static_cast<__int128>(1) << 62;
  const __int128 limit128 = kLimit64 * kLimit64;
  const __int128 range = static_cast<__int128>(fmax) - fmin;
  if (total > kLimit64 / 8) fail(ErrorCode::kOverflow, "total weight too large for exact L2");
  const __int128 scale = 8 * total * total;
  if (scale > kLimit64 || range > kLimit64 / scale * 2) {
    fail(ErrorCode::kOverflow, "exact L2 grid index exceeds 62 bits");
  }
  const auto top = static_cast<std::int64_t>(range * (scale / 2));
  // Flow values stay below total * (scale * range + 2 top + 1) + 1.
  const __int128 per_unit = scale * range + 2 * static_cast<__int128>(top) + 1;
  if (per_unit <= kLimit64 / total) {
    return detail::l2_exact_with<std::int64_t>(order, wf, prep, scale, fmin, top);
  }
  if (per_unit > limit128 / total) {
    fail(ErrorCode::kOverflow, "exact L2 derivative weights exceed 128-bit capacities");
  }
  return detail::l2_exact_with<__int128>(order, wf, prep, scale, fmin, top);
}

}  // namespace isoreg
