#include <gtest/gtest.h>

#include <set>
#include <string>

#include "support.hpp"

namespace isoreg {
namespace {

using testing::diamond;
using testing::reachable_pairs;

std::set<Edge> edge_set(const ViolatorDag& vd) { return {vd.edges.begin(), vd.edges.end()}; }

TEST(TransitiveClosure, Examples) {
  EXPECT_EQ(reachable_pairs(transitive_closure(Dag::chain(3))),
            (std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_TRUE(reachable_pairs(transitive_closure(Dag::from_edges(2, {}))).empty());
  EXPECT_EQ(reachable_pairs(transitive_closure(diamond())),
            (std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}}));
}

TEST(TransitiveClosure, MatchesPathSearch) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    auto dag = testing::random_dag(rng, 70, 0.05);
    auto closure = transitive_closure(dag);
    for (VertexId s = 0; s < dag.size(); ++s) {
      std::vector<char> seen(dag.size(), 0);
      std::vector<VertexId> stack{s};
      while (!stack.empty()) {
        auto u = stack.back();
        stack.pop_back();
        for (auto v : dag.successors(u)) {
          if (!seen[v]) {
            seen[v] = 1;
            stack.push_back(v);
          }
        }
      }
      for (VertexId t = 0; t < dag.size(); ++t) ASSERT_EQ(closure.reaches(s, t), seen[t] != 0);
    }
  }
}

TEST(ViolatorClosure, Examples) {
  auto all = violator_closure(Dag::chain(3), WeightedFunction::unweighted({2, 1, 0}));
  EXPECT_EQ(edge_set(all), (std::set<Edge>{{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_EQ(all.origin, ViolatorDag::Origin::kClosure);
  EXPECT_TRUE(violator_closure(Dag::chain(3), WeightedFunction::unweighted({0, 1, 2})).edges.empty());
  auto d = violator_closure(diamond(), WeightedFunction::unweighted({3, 1, 2, 0}));
  EXPECT_EQ(edge_set(d), (std::set<Edge>{{0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}}));
}

TEST(ViolatorPairwise, NestedRectangles) {
  std::vector<Box> boxes = {{{1, 1}, {2, 2}}, {{0, 0}, {3, 3}}, {{-1, -1}, {4, 4}}};
  auto vd = violator_pairwise(std::span<const Box>(boxes),
                              [](const Box& a, const Box& b) { return a.inside(b); },
                              WeightedFunction::unweighted({3, 2, 1}), true);
  EXPECT_EQ(edge_set(vd), (std::set<Edge>{{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_EQ(vd.origin, ViolatorDag::Origin::kPairwise);
}

TEST(ViolatorPairwise, DivisibilityOnPrimesIsEmpty) {
  std::vector<int> items = {2, 3, 5};
  auto vd = violator_pairwise(std::span<const int>(items),
                              [](int a, int b) { return a != b && b % a == 0; },
                              WeightedFunction::unweighted({9, 1, 4}), true);
  EXPECT_TRUE(vd.edges.empty());
}

TEST(ViolatorPairwise, SubstringChain) {
  std::vector<std::string> items = {"a", "ab", "abc"};
  auto vd = violator_pairwise(
      std::span<const std::string>(items),
      [](const std::string& a, const std::string& b) {
        return a.size() < b.size() && b.find(a) != std::string::npos;
      },
      WeightedFunction::unweighted({3, 2, 1}), true);
  EXPECT_EQ(edge_set(vd), (std::set<Edge>{{0, 1}, {0, 2}, {1, 2}}));
}

TEST(ViolatorPairwise, NonTransitiveComparatorIsRejected) {
  std::vector<int> items = {0, 1, 2};
  // 0 < 1 and 1 < 2 but not 0 < 2.
  auto precedes = [](int a, int b) { return b == a + 1; };
  EXPECT_THROW(violator_pairwise(std::span<const int>(items), precedes,
                                 WeightedFunction::unweighted({0, 0, 0}), true),
               Error);
}

TEST(SteinerRelation, Examples) {
  EXPECT_EQ(steiner_relation("00", "0*"), SteinerOrder::kBelow);
  EXPECT_EQ(steiner_relation("01", "**"), SteinerOrder::kBelow);
  EXPECT_EQ(steiner_relation("10", "**"), SteinerOrder::kAbove);
  EXPECT_EQ(steiner_relation("11", "0*"), SteinerOrder::kIncomparable);
  EXPECT_EQ(steiner_relation("01", "0*"), SteinerOrder::kAbove);
  EXPECT_EQ(steiner_relation("10", "10"), SteinerOrder::kEqual);
  EXPECT_THROW(SteinerCoordinate::parse("*0"), Error);
  EXPECT_THROW(steiner_relation("0", "0*"), Error);
}

// Two points on opposite sides of a Steiner coordinate are ordered the same
// way as the points themselves.
TEST(SteinerRelation, SeparatesOrderedPairs) {
  const unsigned k = 3;
  auto bits = [&](unsigned x) {
    std::string s;
    for (unsigned i = k; i-- > 0;) s.push_back(static_cast<char>('0' + ((x >> i) & 1U)));
    return s;
  };
  for (unsigned a = 0; a < 8; ++a) {
    for (unsigned b = a + 1; b < 8; ++b) {
      int separators = 0;
      for (unsigned j = 0; j < k; ++j) {
        std::string t = bits(a).substr(0, j) + std::string(k - j, '*');
        if (steiner_relation(bits(a), t) == SteinerOrder::kBelow &&
            steiner_relation(bits(b), t) == SteinerOrder::kAbove) {
          ++separators;
        }
        EXPECT_FALSE(steiner_relation(bits(b), t) == SteinerOrder::kBelow &&
                     steiner_relation(bits(a), t) == SteinerOrder::kAbove);
      }
      EXPECT_EQ(separators, 1) << a << " " << b;
    }
  }
}

void expect_rendezvous_shape(const ViolatorDag& vd) {
  std::vector<int> degree(vd.vertex_count(), 0);
  for (auto [u, v] : vd.edges) {
    EXPECT_NE(u < vd.real_count, v < vd.real_count) << "edge " << u << "->" << v;
    ++degree[u];
    ++degree[v];
  }
  for (auto s = vd.real_count; s < vd.vertex_count(); ++s) EXPECT_GE(degree[s], 2);
  EXPECT_NO_THROW(as_dag(vd));
}

TEST(Rendezvous, TwoPointsMeetThroughOneSteinerVertex) {
  std::vector<double> xy = {0, 0, 1, 1};
  auto points = PointSet::from_coordinates(2, 2, xy);
  auto vd = rendezvous_violator(points, WeightedFunction::unweighted({3, 1}));
  expect_rendezvous_shape(vd);
  EXPECT_EQ(vd.origin, ViolatorDag::Origin::kRendezvous);
  bool found = false;
  for (auto [u, s] : vd.edges) {
    if (u != 0) continue;
    for (auto [t, v] : vd.edges) found |= t == s && v == 1;
  }
  EXPECT_TRUE(found);
  auto reach = original_reachability(vd);
  EXPECT_TRUE(reach.reaches(0, 1));
  EXPECT_FALSE(reach.reaches(1, 0));
}

TEST(Rendezvous, IsotonicPointsHaveNoReachablePair) {
  std::vector<double> xy = {0, 0, 1, 0, 0, 1, 2, 2};
  auto points = PointSet::from_coordinates(4, 2, xy);
  auto vd = rendezvous_violator(points, WeightedFunction::unweighted({0, 1, 1, 2}));
  EXPECT_TRUE(reachable_pairs(original_reachability(vd)).empty());
}

TEST(Rendezvous, OneDimensionMatchesChain) {
  std::vector<double> x = {0, 1, 2};
  auto wf = WeightedFunction::unweighted({2, 1, 0});
  auto vd = rendezvous_violator(PointSet::from_coordinates(3, 1, x), wf);
  EXPECT_EQ(reachable_pairs(original_reachability(vd)),
            reachable_pairs(original_reachability(violator_closure(Dag::chain(3), wf))));
}

// Reachability between originals equals the violating pairs, and every
// violating pair is joined by a path of length two.
TEST(Rendezvous, ReachabilityEqualsViolatingPairs) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + rng() % 24;
    const std::size_t d = 1 + rng() % 3;
    std::uniform_int_distribution<int> coord(0, 4);
    std::vector<double> xs(n * d);
    for (auto& x : xs) x = coord(rng);
    auto points = PointSet::from_coordinates(n, d, xs);
    auto wf = testing::random_function(rng, n, 5, 1, 1);
    auto vd = rendezvous_violator(points, wf);
    expect_rendezvous_shape(vd);

    std::vector<Edge> expected;
    for (VertexId u = 0; u < n; ++u) {
      for (VertexId v = 0; v < n; ++v) {
        if (points.precedes(u, v) && wf.values[u] > wf.values[v]) expected.emplace_back(u, v);
      }
    }
    ASSERT_EQ(reachable_pairs(original_reachability(vd)), expected) << "trial " << trial;

    std::vector<std::vector<VertexId>> out(vd.vertex_count()), in(vd.vertex_count());
    for (auto [a, b] : vd.edges) {
      out[a].push_back(b);
      in[b].push_back(a);
    }
    for (auto [u, v] : expected) {
      bool two = false;
      for (auto s : out[u]) two |= std::find(in[v].begin(), in[v].end(), s) != in[v].end();
      EXPECT_TRUE(two) << u << "->" << v;
    }
  }
}

TEST(Rendezvous, SubsetIdsAreSubsetPositions) {
  std::vector<double> x = {0, 1, 2, 3, 4};
  auto points = PointSet::from_coordinates(5, 1, x);
  std::vector<VertexId> subset = {4, 1, 3};
  std::vector<std::int64_t> keys = {0, 5, 1};  // x = 4, 1, 3
  auto vd = rendezvous_violator(points, subset, keys);
  EXPECT_EQ(vd.real_count, 3U);
  EXPECT_EQ(reachable_pairs(original_reachability(vd)), (std::vector<Edge>{{1, 0}, {1, 2}, {2, 0}}));
}

TEST(PointSet, RankCompression) {
  std::vector<double> xy = {10, -1, 2.5, 7, 10, 7};
  auto ps = PointSet::from_coordinates(3, 2, xy);
  EXPECT_EQ(ps.rank(0, 0), 1U);
  EXPECT_EQ(ps.rank(1, 0), 0U);
  EXPECT_EQ(ps.rank(2, 0), 1U);
  EXPECT_EQ(ps.rank(0, 1), 0U);
  EXPECT_EQ(ps.rank(1, 1), 1U);
  EXPECT_TRUE(ps.precedes(0, 2));
  EXPECT_FALSE(ps.precedes(2, 0));
  EXPECT_THROW(PointSet::from_coordinates(2, 2, std::vector<double>{1, 2, 3}), Error);
}

TEST(Boxes, ContainmentBecomesDomination) {
  std::vector<Box> boxes = {{{1, 1}, {2, 2}}, {{0, 0}, {3, 3}}};
  auto ps = boxes_to_domination(boxes);
  EXPECT_TRUE(ps.precedes(0, 1));
  EXPECT_FALSE(ps.precedes(1, 0));
  EXPECT_TRUE(boxes[0].inside(boxes[1]));
}

TEST(Boxes, IdenticalBoxesAreUnordered) {
  std::vector<Box> boxes = {{{0, 0}, {1, 1}}, {{0, 0}, {1, 1}}};
  auto ps = boxes_to_domination(boxes);
  EXPECT_FALSE(ps.precedes(0, 1));
  EXPECT_FALSE(ps.precedes(1, 0));
  EXPECT_FALSE(boxes[0].inside(boxes[1]));
}

TEST(Boxes, DisjointBoxesAreIncomparable) {
  std::vector<Box> boxes = {{{0, 0}, {1, 1}}, {{2, 2}, {3, 3}}};
  auto ps = boxes_to_domination(boxes);
  EXPECT_FALSE(ps.precedes(0, 1));
  EXPECT_FALSE(ps.precedes(1, 0));
}

TEST(Boxes, MalformedBoxIsRejected) {
  std::vector<Box> boxes = {{{2, 0}, {1, 1}}};
  EXPECT_THROW(boxes_to_domination(boxes), Error);
}

TEST(Boxes, RendezvousMatchesPairwise) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> coord(0, 6);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng() % 12;
    std::vector<Box> boxes(n);
    for (auto& b : boxes) {
      for (int d = 0; d < 2; ++d) {
        int a = coord(rng), c = coord(rng);
        b.lower.push_back(std::min(a, c));
        b.upper.push_back(std::max(a, c));
      }
    }
    auto wf = testing::random_function(rng, n, 4, 1, 1);
    auto pairwise = violator_pairwise(std::span<const Box>(boxes),
                                      [](const Box& a, const Box& b) { return a.inside(b); },
                                      wf, true);
    auto steiner = rendezvous_violator(boxes_to_domination(boxes), wf);
    EXPECT_EQ(reachable_pairs(original_reachability(steiner)),
              reachable_pairs(original_reachability(pairwise)));
  }
}

TEST(OrderViolators, AllStrategiesAgree) {
  std::mt19937_64 rng(24);
  std::uniform_int_distribution<int> coord(0, 5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng() % 20;
    std::vector<double> xs(n * 2);
    for (auto& x : xs) x = coord(rng);
    auto wf = testing::random_function(rng, n, 5, 1, 1);
    auto closure_order = Order::from_points(PointSet::from_coordinates(n, 2, xs),
                                            ViolatorStrategy::kClosure);
    auto steiner_order = Order::from_points(PointSet::from_coordinates(n, 2, xs),
                                            ViolatorStrategy::kRendezvous);
    std::vector<VertexId> subset;
    std::vector<std::int64_t> keys;
    for (VertexId v = 0; v < n; v += 2) {
      subset.push_back(v);
      keys.push_back(wf.values[v]);
    }
    EXPECT_EQ(reachable_pairs(original_reachability(closure_order.violators(subset, keys))),
              reachable_pairs(original_reachability(steiner_order.violators(subset, keys))));
  }
}

}  // namespace
}  // namespace isoreg
