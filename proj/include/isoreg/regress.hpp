#pragma once

#include <cstdint>
#include <vector>

#include "isoreg/core.hpp"
#include "isoreg/fast_linear.hpp"
#include "isoreg/order.hpp"
#include "isoreg/regress_l0.hpp"
#include "isoreg/regress_partition.hpp"

namespace isoreg {

struct RegressOptions {
  PartitionOptions partition;
};

namespace detail {

inline RegressionResult regress_connected(const Order& order, const WeightedFunction& wf,
                                          const Metric& metric, const RegressOptions& options) {
  switch (metric.kind) {
    case Metric::Kind::kL0: return l0_regress(order, wf);
    case Metric::Kind::kL1: return l1_regress(order, wf);
    case Metric::Kind::kL2: return l2_exact(order, wf);
    case Metric::Kind::kLp: return lp_approx(order, wf, metric.p, metric.delta, options.partition);
  }
  fail(ErrorCode::kInvalidInput, "unknown metric");
}

}  // namespace detail

// Solves each weakly connected component of the order on its own and
// merges the results.
inline RegressionResult regress(const Order& order, const WeightedFunction& wf,
                                const Metric& metric, const RegressOptions& options = {}) {
  if (wf.size() != order.size()) {
    fail(ErrorCode::kInvalidInput, "weighted function length differs from order");
  }
  std::uint32_t count = 0;
  auto label = weak_components(order.reach(), &count);
  std::vector<std::vector<VertexId>> members;
  for (VertexId v = 0; v < order.size(); ++v) {
    if (label[v] >= members.size()) members.resize(label[v] + 1);
    members[label[v]].push_back(v);
  }
  std::erase_if(members, [](const auto& m) { return m.empty(); });
  if (members.size() <= 1) {
    auto result = detail::regress_connected(order, wf, metric, options);
    result.diagnostics.components = members.size();
    return result;
  }

  RegressionResult result;
  result.values.assign(wf.size(), 0.0);
  const bool exact = metric.kind != Metric::Kind::kLp;
  if (exact) result.exact.assign(wf.size(), Rational(0));
  auto& d = result.diagnostics;
  for (const auto& part : members) {
    WeightedFunction sub;
    for (auto v : part) {
      sub.values.push_back(wf.values[v]);
      sub.weights.push_back(wf.weights[v]);
    }
    auto r = detail::regress_connected(order.restrict_to(part), sub, metric, options);
    for (std::size_t i = 0; i < part.size(); ++i) {
      result.values[part[i]] = r.values[i];
      if (exact) result.exact[part[i]] = r.exact[i];
    }
    d.antichain_weight += r.diagnostics.antichain_weight;
    d.n_hat += r.diagnostics.n_hat;
    d.m_hat += r.diagnostics.m_hat;
    d.steiner_count += r.diagnostics.steiner_count;
    d.subproblems += r.diagnostics.subproblems;
    d.pruned += r.diagnostics.pruned;
  }
  d.components = members.size();
  result.error = exact ? regression_error(wf, result.exact, metric)
                       : regression_error(wf, result.values, metric);
  return result;
}

inline RegressionResult regress(const Dag& dag, const WeightedFunction& wf, const Metric& metric,
                                const RegressOptions& options = {}) {
  return regress(Order::from_dag(dag), wf, metric, options);
}

// Linear order 0 < 1 < ... < n-1 through the dedicated chain algorithms.
inline RegressionResult regress_chain(const WeightedFunction& wf, const Metric& metric,
                                      const RegressOptions& options = {}) {
  switch (metric.kind) {
    case Metric::Kind::kL0: return l0_chain(wf);
    case Metric::Kind::kL1: return l1_chain(wf);
    case Metric::Kind::kL2: return pav_l2(wf);
    case Metric::Kind::kLp:
      return lp_approx(Order::from_dag(Dag::chain(wf.size())), wf, metric.p, metric.delta,
                       options.partition);
  }
  fail(ErrorCode::kInvalidInput, "unknown metric");
}

}  // namespace isoreg
