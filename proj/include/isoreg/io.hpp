#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <set>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "isoreg/core.hpp"
#include "isoreg/order.hpp"
#include "isoreg/violator.hpp"

// Text instance format, version 1:
//
//   isoreg 1 <dag|chain|points|boxes>
//   dag:    n m, then n lines "value weight", then m lines "u v"
//   chain:  n, then n lines "value weight"
//   points: n d, then n lines "x_1 .. x_d value weight"
//   boxes:  n d, then n lines "lo_1 .. lo_d hi_1 .. hi_d value weight"
//
// Tokens are whitespace separated; '#' starts a comment.

namespace isoreg {

struct Instance {
  enum class Kind { kDag, kChain, kPoints, kBoxes };

  Kind kind = Kind::kDag;
  std::size_t n = 0;
  std::size_t dims = 0;
  std::vector<Edge> edges;
  std::vector<double> coords;  // points: n rows of dims
  std::vector<Box> boxes;
  WeightedFunction wf;

  Dag dag() const {
    if (kind == Kind::kChain) return Dag::chain(n);
    if (kind != Kind::kDag) fail(ErrorCode::kInvalidInput, "instance carries no explicit dag");
    return Dag::from_edges(n, edges);
  }

  PointSet points() const {
    if (kind == Kind::kBoxes) return boxes_to_domination(boxes);
    if (kind != Kind::kPoints) fail(ErrorCode::kInvalidInput, "instance carries no points");
    return PointSet::from_coordinates(n, dims, coords);
  }

  Order order(ViolatorStrategy strategy = ViolatorStrategy::kAuto) const {
    if (kind == Kind::kDag || kind == Kind::kChain) return Order::from_dag(dag());
    if (kind == Kind::kBoxes && strategy == ViolatorStrategy::kPairwise) {
      return Order::from_pairwise(std::span<const Box>(boxes),
                                  [](const Box& a, const Box& b) { return a.inside(b); });
    }
    return Order::from_points(points(), strategy);
  }
};

inline const char* to_string(Instance::Kind kind) {
  switch (kind) {
    case Instance::Kind::kDag: return "dag";
    case Instance::Kind::kChain: return "chain";
    case Instance::Kind::kPoints: return "points";
    case Instance::Kind::kBoxes: return "boxes";
  }
  return "?";
}

namespace detail {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next line with at least one token; false at end of input.
  bool next(std::vector<std::string_view>& tokens) {
    while (std::getline(in_, text_)) {
      ++line_;
      if (auto hash = text_.find('#'); hash != std::string::npos) text_.resize(hash);
      tokens.clear();
      std::string_view rest(text_);
      while (true) {
        auto start = rest.find_first_not_of(" \t\r\f\v");
        if (start == std::string_view::npos) break;
        rest.remove_prefix(start);
        auto end = rest.find_first_of(" \t\r\f\v");
        tokens.push_back(rest.substr(0, end));
        if (end == std::string_view::npos) break;
        rest.remove_prefix(end);
      }
      if (!tokens.empty()) return true;
    }
    return false;
  }

  std::vector<std::string_view> expect(std::size_t count, const char* what) {
    std::vector<std::string_view> tokens;
    if (!next(tokens)) throw ParseError(line_ + 1, std::string("unexpected end of input, expected ") + what);
    if (tokens.size() != count) {
      throw ParseError(line_, std::string("expected ") + std::to_string(count) + " fields for " +
                                  what + ", found " + std::to_string(tokens.size()));
    }
    return tokens;
  }

  std::size_t line() const noexcept { return line_; }

 private:
  std::istream& in_;
  std::string text_;
  std::size_t line_ = 0;
};

template <class T>
T parse_number(std::string_view token, std::size_t line, const char* what) {
  T value{};
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || end != token.data() + token.size()) {
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace detail

inline Instance parse_instance(std::istream& in) {
  detail::LineReader reader(in);
  Instance inst;
  auto header = reader.expect(3, "header 'isoreg 1 <kind>'");
  if (header[0] != "isoreg" || header[1] != "1") {
    throw ParseError(reader.line(), "header must read 'isoreg 1 <kind>'");
  }
  if (header[2] == "dag") inst.kind = Instance::Kind::kDag;
  else if (header[2] == "chain") inst.kind = Instance::Kind::kChain;
  else if (header[2] == "points") inst.kind = Instance::Kind::kPoints;
  else if (header[2] == "boxes") inst.kind = Instance::Kind::kBoxes;
  else throw ParseError(reader.line(), "unknown instance kind '" + std::string(header[2]) + "'");

  std::size_t m = 0;
  if (inst.kind == Instance::Kind::kChain) {
    auto t = reader.expect(1, "count line");
    inst.n = detail::parse_number<std::size_t>(t[0], reader.line(), "vertex count");
  } else {
    auto t = reader.expect(2, "count line");
    inst.n = detail::parse_number<std::size_t>(t[0], reader.line(), "vertex count");
    if (inst.kind == Instance::Kind::kDag) {
      m = detail::parse_number<std::size_t>(t[1], reader.line(), "edge count");
    } else {
      inst.dims = detail::parse_number<std::size_t>(t[1], reader.line(), "dimension");
      if (inst.dims == 0) throw ParseError(reader.line(), "dimension must be positive");
    }
  }
  if (inst.n > (std::size_t{1} << 31)) throw ParseError(reader.line(), "vertex count too large");

  std::size_t coord_fields = 0;
  if (inst.kind == Instance::Kind::kPoints) coord_fields = inst.dims;
  if (inst.kind == Instance::Kind::kBoxes) coord_fields = 2 * inst.dims;
  std::vector<std::int64_t> values, weights;
  for (std::size_t i = 0; i < inst.n; ++i) {
    auto t = reader.expect(coord_fields + 2, "vertex line");
    const auto line = reader.line();
    std::vector<double> c;
    for (std::size_t k = 0; k < coord_fields; ++k) {
      c.push_back(detail::parse_number<double>(t[k], line, "coordinate"));
    }
    values.push_back(detail::parse_number<std::int64_t>(t[coord_fields], line, "integer value"));
    weights.push_back(detail::parse_number<std::int64_t>(t[coord_fields + 1], line, "integer weight"));
    if (weights.back() < 0) throw ParseError(line, "negative weight");
    if (inst.kind == Instance::Kind::kPoints) {
      inst.coords.insert(inst.coords.end(), c.begin(), c.end());
    } else if (inst.kind == Instance::Kind::kBoxes) {
      Box b{{c.begin(), c.begin() + static_cast<std::ptrdiff_t>(inst.dims)},
            {c.begin() + static_cast<std::ptrdiff_t>(inst.dims), c.end()}};
      for (std::size_t k = 0; k < inst.dims; ++k) {
        if (b.lower[k] > b.upper[k]) throw ParseError(line, "box lower corner exceeds upper corner");
      }
      inst.boxes.push_back(std::move(b));
    }
  }
  std::set<Edge> seen;
  for (std::size_t e = 0; e < m; ++e) {
    auto t = reader.expect(2, "edge line");
    const auto line = reader.line();
    auto u = detail::parse_number<VertexId>(t[0], line, "vertex id");
    auto v = detail::parse_number<VertexId>(t[1], line, "vertex id");
    if (u >= inst.n || v >= inst.n) throw ParseError(line, "edge endpoint out of range");
    if (u == v) throw ParseError(line, "self-loop");
    if (!seen.emplace(u, v).second) throw ParseError(line, "duplicate edge");
    inst.edges.emplace_back(u, v);
  }
  std::vector<std::string_view> extra;
  if (reader.next(extra)) throw ParseError(reader.line(), "unexpected trailing data");
  try {
    inst.wf = WeightedFunction::make(std::move(values), std::move(weights));
  } catch (const Error& e) {
    throw ParseError(reader.line(), e.what());
  }
  return inst;
}

inline Instance parse_instance_text(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

inline Instance parse_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kInvalidInput, "cannot open '" + path + "'");
  return parse_instance(in);
}

// Shortest decimal that reads back to the same double.
inline std::string format_real(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

// Terminating decimal when the denominator has no prime factor other than
// 2 and 5, otherwise "p/q".
inline std::string format_rational(const Rational& r) {
  std::int64_t q = r.denominator();
  int twos = 0, fives = 0;
  while (q % 2 == 0) { q /= 2; ++twos; }
  while (q % 5 == 0) { q /= 5; ++fives; }
  if (q != 1 || std::max(twos, fives) > 18) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
  }
  const int digits = std::max(twos, fives);
  // value * 10^digits is an integer: numerator * (10^digits / denominator).
  __int128 scaled = r.numerator();
  __int128 factor = 1;
  for (int i = 0; i < digits; ++i) factor *= 10;
  scaled *= factor / r.denominator();
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string s;
  do {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(scaled % 10)));
    scaled /= 10;
  } while (scaled > 0 || static_cast<int>(s.size()) <= digits);
  if (digits > 0) s.insert(s.end() - digits, '.');
  if (negative) s.insert(s.begin(), '-');
  return s;
}

}  // namespace isoreg
