#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "isoreg/isoreg.hpp"

namespace isoreg::testing {

// Edges follow a random permutation, so the result is always acyclic.
inline Dag random_dag(std::mt19937_64& rng, std::size_t n, double density) {
  std::vector<VertexId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::bernoulli_distribution coin(density);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (coin(rng)) edges.emplace_back(perm[i], perm[j]);
    }
  }
  return Dag::from_edges(n, std::move(edges));
}

inline WeightedFunction random_function(std::mt19937_64& rng, std::size_t n,
                                        std::int64_t max_value, std::int64_t min_weight,
                                        std::int64_t max_weight) {
  std::uniform_int_distribution<std::int64_t> value(0, max_value),
      weight(min_weight, max_weight);
  std::vector<std::int64_t> f(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = value(rng);
    w[i] = weight(rng);
  }
  return WeightedFunction::make(std::move(f), std::move(w));
}

inline Dag diamond() { return Dag::from_edges(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}); }

// Violating pairs by direct definition.
inline std::vector<Edge> violating_pairs(const Reachability& closure,
                                         std::span<const std::int64_t> f) {
  std::vector<Edge> out;
  for (VertexId u = 0; u < closure.size(); ++u) {
    for (VertexId v = 0; v < closure.size(); ++v) {
      if (closure.reaches(u, v) && f[u] > f[v]) out.emplace_back(u, v);
    }
  }
  return out;
}

inline std::vector<Edge> reachable_pairs(const Reachability& r) {
  std::vector<Edge> out;
  for (VertexId u = 0; u < r.size(); ++u) {
    for (VertexId v = 0; v < r.size(); ++v) {
      if (r.reaches(u, v)) out.emplace_back(u, v);
    }
  }
  return out;
}

template <class T>
bool isotonic_on(const Order& order, const std::vector<T>& values) {
  for (VertexId u = 0; u < order.size(); ++u) {
    for (VertexId v = 0; v < order.size(); ++v) {
      if (order.precedes(u, v) && values[v] < values[u]) return false;
    }
  }
  return true;
}

inline std::vector<Rational> rationals(std::initializer_list<std::int64_t> xs) {
  return {xs.begin(), xs.end()};
}

}  // namespace isoreg::testing
