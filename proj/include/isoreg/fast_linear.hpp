#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "isoreg/core.hpp"
#include "isoreg/regress_partition.hpp"

// Linear orders: vertex i precedes vertex i + 1.

namespace isoreg {

// Pool adjacent violators with exact block means.  Zero-weight vertices
// follow the same convention as l2_exact.
inline RegressionResult pav_l2(const WeightedFunction& wf) {
  struct Block {
    std::int64_t num;
    std::int64_t den;
    std::size_t end;  // one past the last positive-weight index pooled
  };
  std::vector<Block> blocks;
  std::vector<std::size_t> heavy;
  for (std::size_t i = 0; i < wf.size(); ++i) {
    if (wf.weights[i] == 0) continue;
    heavy.push_back(i);
    blocks.push_back({wf.weights[i] * wf.values[i], wf.weights[i], heavy.size()});
    while (blocks.size() > 1) {
      auto& b = blocks.back();
      auto& a = blocks[blocks.size() - 2];
      // a.num / a.den > b.num / b.den
      if (static_cast<__int128>(a.num) * b.den <= static_cast<__int128>(b.num) * a.den) break;
      a.num += b.num;
      a.den += b.den;
      a.end = b.end;
      blocks.pop_back();
    }
  }
  RegressionResult result;
  result.exact.assign(wf.size(), Rational(0));
  std::vector<char> set(wf.size(), 0);
  std::size_t start = 0;
  for (const auto& b : blocks) {
    const Rational mean(b.num, b.den);
    for (auto k = start; k < b.end; ++k) {
      result.exact[heavy[k]] = mean;
      set[heavy[k]] = 1;
    }
    start = b.end;
  }
  // Vertices in no violating pair keep f; remaining zero-weight vertices
  // copy the nearest anchored value before them, else after them.
  const std::size_t n = wf.size();
  std::vector<std::int64_t> suffix_min(n + 1, std::numeric_limits<std::int64_t>::max());
  for (std::size_t i = n; i-- > 0;) suffix_min[i] = std::min(suffix_min[i + 1], wf.values[i]);
  std::int64_t prefix_max = std::numeric_limits<std::int64_t>::min();
  for (std::size_t i = 0; i < n; ++i) {
    if (prefix_max <= wf.values[i] && wf.values[i] <= suffix_min[i + 1]) {
      result.exact[i] = Rational(wf.values[i]);
      set[i] = 1;
    }
    prefix_max = std::max(prefix_max, wf.values[i]);
  }
  std::optional<Rational> last;
  std::vector<char> filled(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (set[i]) last = result.exact[i];
    else if (last) result.exact[i] = *last;
    filled[i] = last.has_value();
  }
  std::optional<Rational> next;
  for (std::size_t i = n; i-- > 0;) {
    if (set[i]) next = result.exact[i];
    else if (!filled[i] && next) result.exact[i] = *next;
  }
  if (!last) {
    std::int64_t running = std::numeric_limits<std::int64_t>::min();
    for (std::size_t i = 0; i < n; ++i) {
      running = std::max(running, wf.values[i]);
      result.exact[i] = Rational(running);
    }
  }
  for (const auto& r : result.exact) result.values.push_back(to_double(r));
  result.error = regression_error(wf, result.exact, Metric::l2());
  result.diagnostics.components = 1;
  return result;
}

// Maximum-weight weakly increasing subsequence kept, every other vertex set
// to the last kept value before it (first kept value after it at the front).
inline RegressionResult l0_chain(const WeightedFunction& wf) {
  const std::size_t n = wf.size();
  std::vector<std::int64_t> sorted = wf.values;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  // Fenwick tree over value ranks holding (best weight, end index).
  using Entry = std::pair<std::int64_t, std::int64_t>;
  std::vector<Entry> tree(sorted.size() + 1, {-1, -1});
  auto better = [](const Entry& a, const Entry& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  };
  std::vector<std::int64_t> best(n), parent(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto rank = static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), wf.values[i]) - sorted.begin()) + 1;
    Entry top{-1, -1};
    for (auto k = rank; k > 0; k -= k & (~k + 1)) {
      if (better(tree[k], top)) top = tree[k];
    }
    best[i] = wf.weights[i] + std::max<std::int64_t>(top.first, 0);
    parent[i] = top.first >= 0 ? top.second : -1;
    const Entry mine{best[i], static_cast<std::int64_t>(i)};
    for (auto k = rank; k < tree.size(); k += k & (~k + 1)) {
      if (better(mine, tree[k])) tree[k] = mine;
    }
  }
  std::vector<char> kept(n, 0);
  std::int64_t kept_weight = 0;
  if (n > 0) {
    std::int64_t end = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (best[i] > best[end]) end = static_cast<std::int64_t>(i);
    }
    kept_weight = best[end];
    for (auto v = end; v >= 0; v = parent[v]) kept[v] = 1;
  }
  std::vector<std::int64_t> values(n);
  std::int64_t first = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (kept[i]) {
      first = wf.values[i];
      break;
    }
  }
  std::int64_t last = first;
  for (std::size_t i = 0; i < n; ++i) {
    if (kept[i]) last = wf.values[i];
    values[i] = last;
  }
  RegressionResult result;
  result.values.assign(values.begin(), values.end());
  result.exact.assign(values.begin(), values.end());
  result.error = regression_error(wf, values, Metric::l0());
  result.diagnostics.antichain_weight = kept_weight;
  result.diagnostics.components = 1;
  return result;
}

// Best 0*1* labelling of a chain under weighted disagreement.  Among equal
// costs the longest run of zeros wins.
template <class Cap>
std::vector<std::int64_t> binary_l1_chain(std::span<const std::int64_t> labels,
                                          std::span<const Cap> weights) {
  const std::size_t n = labels.size();
  // cost(k) = weight of ones in [0,k) + weight of zeros in [k,n).
  Cap cost{0};
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] == 0) cost += weights[i];
  }
  Cap best = cost;
  std::size_t best_k = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    if (labels[k - 1] == 0) cost -= weights[k - 1];
    else cost += weights[k - 1];
    if (!(best < cost)) {
      best = cost;
      best_k = k;
    }
  }
  std::vector<std::int64_t> out(n, 1);
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(best_k), 0);
  return out;
}

// Exact L1 regression on a chain: value partitioning with the linear-time
// binary step.
inline RegressionResult l1_chain(const WeightedFunction& wf) {
  const auto chain = Dag::chain(wf.size());
  detail::Prepared prep;
  prep.fixed = nonviolators(chain, wf.values);
  for (VertexId v = 0; v < wf.size(); ++v) {
    if (!prep.fixed[v]) prep.kept.push_back(v);
  }
  auto split = [](std::span<const VertexId>, std::span<const std::int64_t> labels,
                  std::span<const std::int64_t> weights) {
    return binary_l1_chain(labels, weights);
  };
  std::size_t subproblems = 0;
  auto result = l1_partition(chain, wf, prep, split, subproblems);
  detail::fill_diagnostics(result.diagnostics, prep, {}, subproblems);
  return result;
}

}  // namespace isoreg
