#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isoreg/dag.hpp"
#include "isoreg/violator.hpp"

namespace isoreg {

enum class ViolatorStrategy { kClosure, kRendezvous, kPairwise, kAuto };

inline std::string to_string(ViolatorStrategy s) {
  switch (s) {
    case ViolatorStrategy::kClosure: return "closure";
    case ViolatorStrategy::kRendezvous: return "rendezvous";
    case ViolatorStrategy::kPairwise: return "pairwise";
    case ViolatorStrategy::kAuto: return "auto";
  }
  return "?";
}

// A partial order over vertices 0..size()-1 together with the means to build
// violator dags for any vertex subset.
//
// reach() is a dag whose first size() vertices are the ordered vertices and
// whose remaining vertices (if any) are pass-through Steiner nodes; u
// precedes v iff u reaches v in it.  Scans for pruning and for extending an
// antichain run over it.
class Order {
 public:
  enum class Kind {
    kClosure,     // explicit dag, bitset transitive closure
    kRelation,    // explicit full comparison relation
    kRendezvous,  // points under domination, Steiner violator dags
  };

  static Order from_dag(Dag dag) {
    Order o;
    o.kind_ = Kind::kClosure;
    o.n_ = dag.size();
    o.closure_ = std::make_shared<Reachability>(transitive_closure(dag));
    o.reach_ = std::make_shared<Dag>(std::move(dag));
    return o;
  }

  // `relation` must already be transitive; its pairs become the carrier.
  static Order from_relation(Reachability relation) {
    Order o;
    o.kind_ = Kind::kRelation;
    o.n_ = relation.size();
    o.reach_ = std::make_shared<Dag>(Dag::from_trusted_edges(o.n_, relation.pairs()));
    o.closure_ = std::make_shared<Reachability>(std::move(relation));
    return o;
  }

  template <class T, class Precedes>
  static Order from_pairwise(std::span<const T> items, Precedes&& precedes,
                             bool check = kCheckComparators) {
    auto rel = pairwise_relation(items, precedes, check);
    try {
      return from_relation(std::move(rel));
    } catch (const CycleDetected& e) {
      fail(ErrorCode::kOrderViolation, std::string("comparator relation has a ") + e.what());
    }
  }

  // Domination order.  kRendezvous keeps the points and builds Steiner
  // violator dags; kClosure (or kPairwise) materializes every dominated pair.
  static Order from_points(PointSet points, ViolatorStrategy strategy) {
    if (strategy == ViolatorStrategy::kAuto) {
      strategy = points.dims() >= 2 ? ViolatorStrategy::kRendezvous
                                    : ViolatorStrategy::kClosure;
    }
    if (strategy != ViolatorStrategy::kRendezvous) {
      Reachability rel(points.size());
      for (VertexId u = 0; u < points.size(); ++u) {
        for (VertexId v = 0; v < points.size(); ++v) {
          if (points.precedes(u, v)) rel.set(u, v);
        }
      }
      return from_relation(std::move(rel));
    }
    Order o;
    o.kind_ = Kind::kRendezvous;
    o.n_ = points.size();
    std::vector<VertexId> all(o.n_);
    std::iota(all.begin(), all.end(), 0);
    auto carrier = rendezvous_graph(points, all);
    o.reach_ = std::make_shared<Dag>(
        Dag::from_trusted_edges(carrier.vertex_count(), std::move(carrier.edges)));
    o.points_ = std::make_shared<PointSet>(std::move(points));
    return o;
  }

  std::size_t size() const noexcept { return n_; }
  Kind kind() const noexcept { return kind_; }
  const Dag& reach() const noexcept { return *reach_; }
  const Reachability* closure() const noexcept { return closure_.get(); }
  const PointSet* points() const noexcept { return points_.get(); }

  bool precedes(VertexId u, VertexId v) const {
    if (closure_) return closure_->reaches(u, v);
    return points_->precedes(u, v);
  }

  // Violating pairs among `subset` under `keys` (indexed by subset position;
  // output ids are subset positions too).
  ViolatorDag violators(std::span<const VertexId> subset,
                        std::span<const std::int64_t> keys) const {
    if (kind_ == Kind::kRendezvous) return rendezvous_violator(*points_, subset, keys);
    auto vd = closure_violators(*closure_, subset, keys);
    if (kind_ == Kind::kRelation) vd.origin = ViolatorDag::Origin::kPairwise;
    return vd;
  }

  // Carrier of the order restricted to `subset`: originals are subset
  // positions, extra vertices are Steiner nodes.
  std::shared_ptr<const Dag> local_reach(std::span<const VertexId> subset) const {
    if (subset.size() == n_) {
      bool identity = true;
      for (std::size_t i = 0; i < subset.size() && identity; ++i) identity = subset[i] == i;
      if (identity) return reach_;
    }
    if (kind_ == Kind::kRendezvous) {
      auto g = rendezvous_graph(*points_, subset);
      return std::make_shared<Dag>(Dag::from_trusted_edges(g.vertex_count(), std::move(g.edges)));
    }
    const std::size_t words = closure_->words_per_row();
    if (kind_ == Kind::kClosure && subset.size() * words >= n_ + reach_->edge_count()) {
      // Large subsets: the original dag, others demoted to pass-through.
      constexpr auto kUnset = static_cast<VertexId>(-1);
      std::vector<VertexId> local(n_, kUnset);
      for (std::size_t i = 0; i < subset.size(); ++i) local[subset[i]] = static_cast<VertexId>(i);
      auto next = static_cast<VertexId>(subset.size());
      for (auto& id : local) {
        if (id == kUnset) id = next++;
      }
      std::vector<Edge> edges;
      edges.reserve(reach_->edge_count());
      for (auto [u, v] : reach_->edges()) edges.emplace_back(local[u], local[v]);
      return std::make_shared<Dag>(Dag::from_trusted_edges(n_, std::move(edges)));
    }
    std::vector<std::uint64_t> member(words, 0);
    std::vector<VertexId> local(n_, 0);
    for (std::size_t i = 0; i < subset.size(); ++i) {
      member[subset[i] / 64] |= std::uint64_t{1} << (subset[i] % 64);
      local[subset[i]] = static_cast<VertexId>(i);
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < subset.size(); ++i) {
      auto row = closure_->row(subset[i]);
      for (std::size_t w = 0; w < words; ++w) {
        for (auto bits = row[w] & member[w]; bits; bits &= bits - 1) {
          edges.emplace_back(static_cast<VertexId>(i), local[w * 64 + std::countr_zero(bits)]);
        }
      }
    }
    return std::make_shared<Dag>(Dag::from_trusted_edges(subset.size(), std::move(edges)));
  }

  // Restriction to `subset` (a union of weak components); ids become subset
  // positions.
  Order restrict_to(std::span<const VertexId> subset) const {
    if (kind_ == Kind::kRendezvous) {
      std::vector<double> coords;
      coords.reserve(subset.size() * points_->dims());
      for (auto v : subset) {
        for (auto c : points_->point(v)) coords.push_back(c);
      }
      return from_points(PointSet::from_coordinates(subset.size(), points_->dims(), coords),
                         ViolatorStrategy::kRendezvous);
    }
    std::vector<VertexId> local(n_, static_cast<VertexId>(-1));
    for (std::size_t i = 0; i < subset.size(); ++i) local[subset[i]] = static_cast<VertexId>(i);
    if (kind_ == Kind::kRelation) {
      Reachability rel(subset.size());
      for (std::size_t i = 0; i < subset.size(); ++i) {
        for (std::size_t j = 0; j < subset.size(); ++j) {
          if (closure_->reaches(subset[i], subset[j])) {
            rel.set(static_cast<VertexId>(i), static_cast<VertexId>(j));
          }
        }
      }
      return from_relation(std::move(rel));
    }
    std::vector<Edge> edges;
    for (auto [u, v] : reach_->edges()) {
      if (local[u] != static_cast<VertexId>(-1) && local[v] != static_cast<VertexId>(-1)) {
        edges.emplace_back(local[u], local[v]);
      }
    }
    return from_dag(Dag::from_trusted_edges(subset.size(), std::move(edges)));
  }

 private:
  Kind kind_ = Kind::kClosure;
  std::size_t n_ = 0;
  std::shared_ptr<const Dag> reach_;
  std::shared_ptr<const Reachability> closure_;
  std::shared_ptr<const PointSet> points_;
};

}  // namespace isoreg
