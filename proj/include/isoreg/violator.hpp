#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "isoreg/core.hpp"
#include "isoreg/dag.hpp"

namespace isoreg {

// A dag whose reachability between original vertices (ids below real_count)
// is exactly the violating-pair order.  Steiner vertices follow the
// originals and carry no weight.
struct ViolatorDag {
  enum class Origin { kClosure, kPairwise, kRendezvous };

  std::size_t real_count = 0;
  std::size_t steiner_count = 0;
  std::vector<Edge> edges;
  Origin origin = Origin::kClosure;

  std::size_t vertex_count() const noexcept { return real_count + steiner_count; }
};

// Violating pairs of `closure` restricted to `subset`; keys are indexed by
// position in the subset and so are the output ids.
inline ViolatorDag closure_violators(const Reachability& closure,
                                     std::span<const VertexId> subset,
                                     std::span<const std::int64_t> keys) {
  const std::size_t words = closure.words_per_row();
  std::vector<std::uint64_t> member(words, 0);
  std::vector<VertexId> local(closure.size(), 0);
  for (std::size_t i = 0; i < subset.size(); ++i) {
    member[subset[i] / 64] |= std::uint64_t{1} << (subset[i] % 64);
    local[subset[i]] = static_cast<VertexId>(i);
  }
  ViolatorDag out;
  out.real_count = subset.size();
  out.origin = ViolatorDag::Origin::kClosure;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    auto row = closure.row(subset[i]);
    for (std::size_t w = 0; w < words; ++w) {
      for (auto bits = row[w] & member[w]; bits; bits &= bits - 1) {
        auto j = local[w * 64 + std::countr_zero(bits)];
        if (keys[i] > keys[j]) out.edges.emplace_back(static_cast<VertexId>(i), j);
      }
    }
  }
  return out;
}

inline ViolatorDag violator_closure(const Dag& dag, const WeightedFunction& wf) {
  if (wf.size() != dag.size()) {
    fail(ErrorCode::kInvalidInput, "weighted function length differs from dag");
  }
  auto closure = transitive_closure(dag);
  std::vector<VertexId> all(dag.size());
  std::iota(all.begin(), all.end(), 0);
  return closure_violators(closure, all, wf.values);
}

// Full comparison relation of `items` under a strict partial order, one
// comparator call per ordered pair.  Random triples of the relation are
// spot-checked for transitivity and antisymmetry when `check` is set.
template <class T, class Precedes>
Reachability pairwise_relation(std::span<const T> items, Precedes&& precedes,
                               bool check) {
  const std::size_t n = items.size();
  Reachability rel(n);
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = 0; v < n; ++v) {
      if (u != v && precedes(items[u], items[v])) rel.set(u, v);
    }
  }
  if (check && n >= 2) {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
    const std::size_t samples = std::min<std::size_t>(4 * n * n, 100000);
    for (std::size_t s = 0; s < samples; ++s) {
      VertexId a = pick(rng), b = pick(rng), c = pick(rng);
      if (rel.reaches(a, b) && rel.reaches(b, a)) {
        fail(ErrorCode::kOrderViolation,
             "comparator is not antisymmetric on items " + std::to_string(a) +
                 ", " + std::to_string(b));
      }
      if (rel.reaches(a, b) && rel.reaches(b, c) && !rel.reaches(a, c)) {
        fail(ErrorCode::kOrderViolation,
             "comparator is not transitive on items " + std::to_string(a) + ", " +
                 std::to_string(b) + ", " + std::to_string(c));
      }
    }
  }
  return rel;
}

#ifdef NDEBUG
inline constexpr bool kCheckComparators = false;
#else
inline constexpr bool kCheckComparators = true;
#endif

template <class T, class Precedes>
ViolatorDag violator_pairwise(std::span<const T> items, Precedes&& precedes,
                              const WeightedFunction& wf,
                              bool check = kCheckComparators) {
  if (wf.size() != items.size()) {
    fail(ErrorCode::kInvalidInput, "weighted function length differs from items");
  }
  auto rel = pairwise_relation(items, precedes, check);
  std::vector<VertexId> all(items.size());
  std::iota(all.begin(), all.end(), 0);
  auto vd = closure_violators(rel, all, wf.values);
  vd.origin = ViolatorDag::Origin::kPairwise;
  return vd;
}

// ---------------------------------------------------------------------------
// Steiner coordinates: a k-bit string whose last (k - prefix_length)
// positions are wildcards.

struct SteinerCoordinate {
  unsigned bits = 0;           // k
  unsigned prefix_length = 0;  // j <= k
  std::uint64_t prefix = 0;    // the j leading bits, right-aligned

  static SteinerCoordinate parse(const std::string& s) {
    SteinerCoordinate t;
    t.bits = static_cast<unsigned>(s.size());
    bool wild = false;
    for (char c : s) {
      if (c == '*') {
        wild = true;
      } else if ((c == '0' || c == '1') && !wild) {
        t.prefix = (t.prefix << 1) | static_cast<std::uint64_t>(c - '0');
        ++t.prefix_length;
      } else {
        fail(ErrorCode::kInvalidInput, "bad Steiner coordinate '" + s + "'");
      }
    }
    return t;
  }
};

enum class SteinerOrder { kEqual, kBelow, kAbove, kIncomparable };

// Relation of a k-bit vertex coordinate q to Steiner coordinate t:
// kBelow when q precedes t, kAbove when t precedes q.
inline SteinerOrder steiner_relation(std::uint64_t q, unsigned q_bits,
                                     const SteinerCoordinate& t) {
  if (q_bits != t.bits) fail(ErrorCode::kInvalidInput, "bit length mismatch");
  const unsigned j = t.prefix_length;
  if (j == t.bits) return q == t.prefix ? SteinerOrder::kEqual : SteinerOrder::kIncomparable;
  if ((q >> (t.bits - j)) != t.prefix) return SteinerOrder::kIncomparable;
  const bool next = (q >> (t.bits - j - 1)) & 1U;
  return next ? SteinerOrder::kAbove : SteinerOrder::kBelow;
}

inline SteinerOrder steiner_relation(const std::string& q, const std::string& t) {
  if (q.find('*') != std::string::npos) {
    fail(ErrorCode::kInvalidInput, "vertex coordinate has a wildcard");
  }
  std::uint64_t bits = 0;
  for (char c : q) {
    if (c != '0' && c != '1') fail(ErrorCode::kInvalidInput, "bad bit string");
    bits = (bits << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return steiner_relation(bits, static_cast<unsigned>(q.size()),
                          SteinerCoordinate::parse(t));
}

// ---------------------------------------------------------------------------
// Points under domination.

class PointSet {
 public:
  PointSet() = default;

  // Row-major coordinates; each dimension is rank-compressed.
  static PointSet from_coordinates(std::size_t n, std::size_t dims,
                                   std::span<const double> coords) {
    if (coords.size() != n * dims) {
      fail(ErrorCode::kInvalidInput, "coordinate count is not n*d");
    }
    if (dims == 0) fail(ErrorCode::kInvalidInput, "points need d >= 1");
    PointSet ps;
    ps.n_ = n;
    ps.dims_ = dims;
    ps.ranks_.resize(n * dims);
    std::vector<double> column(n);
    for (std::size_t d = 0; d < dims; ++d) {
      for (std::size_t i = 0; i < n; ++i) column[i] = coords[i * dims + d];
      auto sorted = column;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      for (std::size_t i = 0; i < n; ++i) {
        ps.ranks_[i * dims + d] = static_cast<std::uint32_t>(
            std::lower_bound(sorted.begin(), sorted.end(), column[i]) - sorted.begin());
      }
    }
    return ps;
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t dims() const noexcept { return dims_; }
  std::uint32_t rank(VertexId i, std::size_t d) const noexcept {
    return ranks_[i * dims_ + d];
  }
  std::span<const std::uint32_t> point(VertexId i) const noexcept {
    return {ranks_.data() + i * dims_, dims_};
  }

  // u strictly below v: coordinate-wise <= and not identical.
  bool precedes(VertexId u, VertexId v) const noexcept {
    bool differs = false;
    for (std::size_t d = 0; d < dims_; ++d) {
      auto a = rank(u, d), b = rank(v, d);
      if (a > b) return false;
      differs |= a != b;
    }
    return differs;
  }

 private:
  std::size_t n_ = 0;
  std::size_t dims_ = 0;
  std::vector<std::uint32_t> ranks_;
};

namespace detail {

inline unsigned bits_for(std::size_t distinct) {
  return distinct <= 1 ? 0U : static_cast<unsigned>(std::bit_width(distinct - 1));
}

// Rendezvous construction.  Each dimension holds one rank per subset point.
// For every Steiner coordinate tuple with at least one wildcard among the
// first `base_dims` dimensions, the points below it (in-edges) and above it
// (out-edges) are matched dimension by dimension; a Steiner vertex is
// materialized only when both sides are nonempty.
class RendezvousBuilder {
 public:
  RendezvousBuilder(std::vector<std::vector<std::uint32_t>> coords,
                    std::vector<unsigned> bits, std::size_t base_dims,
                    std::size_t count)
      : coords_(std::move(coords)), bits_(std::move(bits)), base_dims_(base_dims) {
    out_.real_count = count;
    out_.origin = ViolatorDag::Origin::kRendezvous;
    up_.resize(coords_.size() + 1);
    down_.resize(coords_.size() + 1);
  }

  ViolatorDag build() && {
    const auto count = static_cast<VertexId>(out_.real_count);
    auto& up = up_[0];
    auto& down = down_[0];
    for (VertexId i = 0; i < count; ++i) {
      up.push_back({i, 0});
      down.push_back({i, 0});
    }
    if (count >= 2) recurse(0, up, down, false);
    return std::move(out_);
  }

 private:
  struct Entry {
    VertexId point;
    std::uint32_t prefix;
    bool operator<(const Entry& o) const noexcept {
      return prefix != o.prefix ? prefix < o.prefix : point < o.point;
    }
  };

  void recurse(std::size_t dim, std::span<const Entry> up,
               std::span<const Entry> down, bool wildcard) {
    if (dim == coords_.size()) {
      if (!wildcard) return;
      const auto s = static_cast<VertexId>(out_.real_count + out_.steiner_count++);
      for (const auto& e : up) out_.edges.emplace_back(e.point, s);
      for (const auto& e : down) out_.edges.emplace_back(s, e.point);
      return;
    }
    const unsigned k = bits_[dim];
    const auto& coord = coords_[dim];
    auto& up2 = up_[dim + 1];
    auto& down2 = down_[dim + 1];
    for (unsigned j = 0; j <= k; ++j) {
      const bool full = j == k;
      // No wildcard anywhere means up and down are the same points.
      if (full && dim + 1 == coords_.size() && !wildcard) continue;
      up2.clear();
      down2.clear();
      for (const auto& e : up) {
        auto c = coord[e.point];
        if (full || ((c >> (k - j - 1)) & 1U) == 0) up2.push_back({e.point, c >> (k - j)});
      }
      if (up2.empty()) continue;
      for (const auto& e : down) {
        auto c = coord[e.point];
        if (full || ((c >> (k - j - 1)) & 1U) == 1) down2.push_back({e.point, c >> (k - j)});
      }
      if (down2.empty()) continue;
      std::sort(up2.begin(), up2.end());
      std::sort(down2.begin(), down2.end());
      const bool child_wild = wildcard || (!full && dim < base_dims_);
      // Children write only into deeper buffers; these spans stay valid.
      std::span<const Entry> us(up2), ds(down2);
      std::size_t a = 0, b = 0;
      while (a < us.size() && b < ds.size()) {
        if (us[a].prefix < ds[b].prefix) {
          ++a;
        } else if (ds[b].prefix < us[a].prefix) {
          ++b;
        } else {
          auto key = us[a].prefix;
          std::size_t a_end = a, b_end = b;
          while (a_end < us.size() && us[a_end].prefix == key) ++a_end;
          while (b_end < ds.size() && ds[b_end].prefix == key) ++b_end;
          recurse(dim + 1, us.subspan(a, a_end - a), ds.subspan(b, b_end - b),
                  child_wild);
          a = a_end;
          b = b_end;
        }
      }
    }
  }

  std::vector<std::vector<std::uint32_t>> coords_;
  std::vector<unsigned> bits_;
  std::size_t base_dims_;
  std::vector<std::vector<Entry>> up_, down_;
  ViolatorDag out_;
};

// Per-dimension ranks of the subset, compressed to the subset's own values;
// single-valued dimensions are dropped.
inline void compress_subset(const PointSet& points, std::span<const VertexId> subset,
                            std::vector<std::vector<std::uint32_t>>& coords,
                            std::vector<unsigned>& bits) {
  for (std::size_t d = 0; d < points.dims(); ++d) {
    std::vector<std::uint32_t> column(subset.size());
    for (std::size_t i = 0; i < subset.size(); ++i) column[i] = points.rank(subset[i], d);
    auto sorted = column;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.size() <= 1) continue;
    for (auto& c : column) {
      c = static_cast<std::uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), c) -
                                     sorted.begin());
    }
    coords.push_back(std::move(column));
    bits.push_back(bits_for(sorted.size()));
  }
}

}  // namespace detail

// Steiner 2-transitive closure of the domination order on `subset` (ids
// local to the subset).  Used as a sparse carrier of the base order.
inline ViolatorDag rendezvous_graph(const PointSet& points,
                                    std::span<const VertexId> subset) {
  std::vector<std::vector<std::uint32_t>> coords;
  std::vector<unsigned> bits;
  detail::compress_subset(points, subset, coords, bits);
  const std::size_t base = coords.size();
  return detail::RendezvousBuilder(std::move(coords), std::move(bits), base,
                                   subset.size())
      .build();
}

// Violator dag for the points of `subset` with function keys (indexed by
// subset position): rendezvous graph over the base dimensions plus one
// dimension ordering points by decreasing key.  Equal keys are ordered
// against the base order (by decreasing lexicographic rank) so that
// non-violating comparable pairs stay unrelated; identical base points are
// never related because every Steiner vertex needs a base wildcard.
inline ViolatorDag rendezvous_violator(const PointSet& points,
                                       std::span<const VertexId> subset,
                                       std::span<const std::int64_t> keys) {
  if (keys.size() != subset.size()) {
    fail(ErrorCode::kInvalidInput, "keys length differs from subset");
  }
  std::vector<std::vector<std::uint32_t>> coords;
  std::vector<unsigned> bits;
  detail::compress_subset(points, subset, coords, bits);
  const std::size_t base = coords.size();
  const std::size_t n = subset.size();

  std::vector<VertexId> lex(n);
  std::iota(lex.begin(), lex.end(), 0);
  std::sort(lex.begin(), lex.end(), [&](VertexId a, VertexId b) {
    for (const auto& c : coords) {
      if (c[a] != c[b]) return c[a] < c[b];
    }
    return a < b;
  });
  std::vector<std::uint32_t> lex_rank(n);
  for (std::size_t i = 0; i < n; ++i) lex_rank[lex[i]] = static_cast<std::uint32_t>(i);

  std::vector<VertexId> by_key(n);
  std::iota(by_key.begin(), by_key.end(), 0);
  std::sort(by_key.begin(), by_key.end(), [&](VertexId a, VertexId b) {
    if (keys[a] != keys[b]) return keys[a] > keys[b];
    return lex_rank[a] > lex_rank[b];
  });
  std::vector<std::uint32_t> key_rank(n);
  for (std::size_t i = 0; i < n; ++i) key_rank[by_key[i]] = static_cast<std::uint32_t>(i);

  if (base > 0 && n >= 2) {
    coords.push_back(std::move(key_rank));
    bits.push_back(detail::bits_for(n));
  }
  return detail::RendezvousBuilder(std::move(coords), std::move(bits), base, n)
      .build();
}

inline ViolatorDag rendezvous_violator(const PointSet& points,
                                       const WeightedFunction& wf) {
  if (wf.size() != points.size()) {
    fail(ErrorCode::kInvalidInput, "weighted function length differs from points");
  }
  std::vector<VertexId> all(points.size());
  std::iota(all.begin(), all.end(), 0);
  return rendezvous_violator(points, all, wf.values);
}

// ---------------------------------------------------------------------------
// Axis-parallel boxes under containment.

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  // Strict containment of *this in other.
  bool inside(const Box& other) const {
    bool differs = false;
    for (std::size_t d = 0; d < lower.size(); ++d) {
      if (other.lower[d] > lower[d] || upper[d] > other.upper[d]) return false;
      differs |= other.lower[d] != lower[d] || upper[d] != other.upper[d];
    }
    return differs;
  }
};

// Box R becomes (-lower, upper); R inside S iff point(R) is dominated by
// point(S).
inline PointSet boxes_to_domination(std::span<const Box> boxes) {
  if (boxes.empty()) return {};
  const std::size_t d = boxes.front().lower.size();
  std::vector<double> coords;
  coords.reserve(boxes.size() * 2 * d);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const auto& b = boxes[i];
    if (b.lower.size() != d || b.upper.size() != d) {
      fail(ErrorCode::kInvalidInput, "box " + std::to_string(i) + " has wrong dimension");
    }
    for (std::size_t k = 0; k < d; ++k) {
      if (b.lower[k] > b.upper[k]) {
        fail(ErrorCode::kInvalidInput,
             "malformed box " + std::to_string(i) + ": lower > upper");
      }
    }
    for (std::size_t k = 0; k < d; ++k) coords.push_back(-b.lower[k]);
    for (std::size_t k = 0; k < d; ++k) coords.push_back(b.upper[k]);
  }
  return PointSet::from_coordinates(boxes.size(), 2 * d, coords);
}

// ---------------------------------------------------------------------------

inline Dag as_dag(const ViolatorDag& vd) {
  return Dag::from_trusted_edges(vd.vertex_count(), vd.edges);
}

// Reachability between original vertices of a violator dag.
inline Reachability original_reachability(const ViolatorDag& vd) {
  auto closure = transitive_closure(as_dag(vd));
  Reachability out(vd.real_count);
  for (VertexId u = 0; u < vd.real_count; ++u) {
    for (VertexId v = 0; v < vd.real_count; ++v) {
      if (closure.reaches(u, v)) out.set(u, v);
    }
  }
  return out;
}

}  // namespace isoreg
