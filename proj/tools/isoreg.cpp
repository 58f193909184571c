// Command-line front end: regress, violator, oracle and bench subcommands
// over instance files in the v1 text format.
//
// Exit status: 0 success, 2 input error, 3 size guard refused the instance,
// 1 any other failure.  Errors go to stderr prefixed "isoreg-error:".

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "isoreg/isoreg.hpp"

namespace {

using namespace isoreg;

struct Flags {
  std::string metric = "l2";
  double p = 2.0;
  double delta = 0.0;  // 0: (f_max - f_min) / 2^20
  std::string order = "auto";
  std::string violator = "auto";
  std::string input;
  std::string output;
  std::string format = "text";
  std::int64_t weight_scale = std::int64_t{1} << 20;
  std::uint64_t seed = 1;
  std::size_t n = 1000;
  bool stats = false;
};

class ExitError : public std::runtime_error {
 public:
  ExitError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

[[noreturn]] void usage_error(const std::string& what) { throw ExitError(2, what); }

ViolatorStrategy strategy_of(const Flags& flags) {
  if (flags.violator == "closure") return ViolatorStrategy::kClosure;
  if (flags.violator == "rendezvous") return ViolatorStrategy::kRendezvous;
  return ViolatorStrategy::kAuto;
}

Metric metric_of(const Flags& flags, const WeightedFunction& wf) {
  if (flags.metric == "l0") return Metric::l0();
  if (flags.metric == "l1") return Metric::l1();
  if (flags.metric == "l2") return Metric::l2();
  double delta = flags.delta;
  if (delta == 0.0) {
    auto [lo, hi] = std::minmax_element(wf.values.begin(), wf.values.end());
    const double range = wf.size() ? static_cast<double>(*hi) - static_cast<double>(*lo) : 0.0;
    delta = range > 0 ? range / 1048576.0 : 1.0;
  }
  return Metric::lp(flags.p, delta);
}

Instance load(const Flags& flags) {
  if (flags.input.empty()) return parse_instance(std::cin);
  return parse_instance_file(flags.input);
}

// Checks --order against the file; "dag" also accepts chain files and then
// bypasses the chain fast paths.
Instance::Kind effective_kind(const Flags& flags, const Instance& inst) {
  if (flags.order == "auto") return inst.kind;
  if (flags.order == "dag" && (inst.kind == Instance::Kind::kDag || inst.kind == Instance::Kind::kChain)) {
    return Instance::Kind::kDag;
  }
  if (flags.order != to_string(inst.kind)) {
    usage_error("--order " + flags.order + " does not match a '" + to_string(inst.kind) +
                "' instance");
  }
  return inst.kind;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) usage_error("cannot open output '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void write_result(const Flags& flags, const Metric& metric, const RegressionResult& r,
                  const std::vector<std::pair<std::string, std::string>>& extra) {
  Output out(flags.output);
  auto& os = out.stream();
  const auto& d = r.diagnostics;
  const std::vector<std::pair<std::string, std::string>> diag = {
      {"antichain_weight", std::to_string(d.antichain_weight)},
      {"n_hat", std::to_string(d.n_hat)},
      {"m_hat", std::to_string(d.m_hat)},
      {"steiner_count", std::to_string(d.steiner_count)},
      {"subproblems", std::to_string(d.subproblems)},
      {"pruned", std::to_string(d.pruned)},
      {"components", std::to_string(d.components)},
  };
  if (flags.format == "json") {
    nlohmann::ordered_json j;
    j["values"] = nlohmann::json::array();
    for (auto v : r.values) j["values"].push_back(v);
    if (!r.exact.empty()) {
      j["exact"] = nlohmann::json::array();
      for (const auto& v : r.exact) j["exact"].push_back(format_rational(v));
    }
    j["metric"] = metric.name();
    j["error_p_sum"] = r.error;
    nlohmann::ordered_json dj;
    for (const auto& [k, v] : diag) dj[k] = std::stoll(v);
    for (const auto& [k, v] : extra) dj[k] = v;
    j["diagnostics"] = dj;
    os << j.dump() << "\n";
    return;
  }
  for (std::size_t v = 0; v < r.values.size(); ++v) {
    os << "v " << v << " "
       << (r.exact.empty() ? format_real(r.values[v]) : format_rational(r.exact[v])) << "\n";
  }
  os << "error " << metric.name() << " " << format_real(r.error) << "\n";
  for (const auto& [k, v] : diag) os << "# diag " << k << "=" << v << "\n";
  for (const auto& [k, v] : extra) os << "# diag " << k << "=" << v << "\n";
}

RegressionResult solve(const Flags& flags, const Instance& inst, const Metric& metric) {
  RegressOptions options;
  options.partition.weight_scale = static_cast<double>(flags.weight_scale);
  const auto kind = effective_kind(flags, inst);
  if (kind == Instance::Kind::kChain) return regress_chain(inst.wf, metric, options);
  if (kind == Instance::Kind::kDag) return regress(Order::from_dag(inst.dag()), inst.wf, metric, options);
  return regress(inst.order(strategy_of(flags)), inst.wf, metric, options);
}

int run_regress(const Flags& flags) {
  auto inst = load(flags);
  auto metric = metric_of(flags, inst.wf);
  auto r = solve(flags, inst, metric);
  std::vector<std::pair<std::string, std::string>> extra = {
      {"order", to_string(effective_kind(flags, inst))}};
  if (metric.kind == Metric::Kind::kLp) {
    extra.emplace_back("p", format_real(metric.p));
    extra.emplace_back("delta", format_real(metric.delta));
  }
  write_result(flags, metric, r, extra);
  return 0;
}

ViolatorDag build_violator(const Flags& flags, const Instance& inst) {
  const auto kind = effective_kind(flags, inst);
  if (kind == Instance::Kind::kDag || kind == Instance::Kind::kChain) {
    return violator_closure(inst.dag(), inst.wf);
  }
  auto order = inst.order(strategy_of(flags));
  std::vector<VertexId> all(inst.n);
  std::iota(all.begin(), all.end(), 0);
  return order.violators(all, inst.wf.values);
}

int run_violator(const Flags& flags) {
  auto inst = load(flags);
  auto vd = build_violator(flags, inst);
  Output out(flags.output);
  auto& os = out.stream();
  const char* origin = vd.origin == ViolatorDag::Origin::kRendezvous ? "rendezvous"
                       : vd.origin == ViolatorDag::Origin::kPairwise ? "pairwise"
                                                                      : "closure";
  if (flags.format == "json") {
    nlohmann::ordered_json j;
    j["origin"] = origin;
    j["real_count"] = vd.real_count;
    j["n_hat"] = vd.vertex_count();
    j["m_hat"] = vd.edges.size();
    j["steiner_count"] = vd.steiner_count;
    if (!flags.stats) {
      j["edges"] = nlohmann::json::array();
      for (auto [u, v] : vd.edges) j["edges"].push_back({u, v});
    }
    os << j.dump() << "\n";
    return 0;
  }
  if (!flags.stats) {
    for (auto [u, v] : vd.edges) os << "e " << u << " " << v << "\n";
  }
  os << "# diag origin=" << origin << "\n";
  os << "# diag real_count=" << vd.real_count << "\n";
  os << "# diag n_hat=" << vd.vertex_count() << "\n";
  os << "# diag m_hat=" << vd.edges.size() << "\n";
  os << "# diag steiner_count=" << vd.steiner_count << "\n";
  return 0;
}

int run_oracle(const Flags& flags) {
  auto inst = load(flags);
  auto metric = metric_of(flags, inst.wf);
  if (inst.n > 10) fail(ErrorCode::kTooLarge, "oracle handles at most 10 vertices");
  Dag dag;
  if (inst.kind == Instance::Kind::kDag || inst.kind == Instance::Kind::kChain) {
    dag = inst.dag();
  } else {
    auto order = inst.order(ViolatorStrategy::kClosure);
    dag = Dag::from_trusted_edges(inst.n, order.closure()->pairs());
  }
  RegressionResult r;
  if (metric.kind == Metric::Kind::kL2) {
    r.exact = oracle_l2_maxmin(dag, inst.wf);
    for (const auto& v : r.exact) r.values.push_back(to_double(v));
    r.error = regression_error(inst.wf, r.exact, metric);
  } else {
    std::vector<Rational> grid;
    if (metric.kind == Metric::Kind::kLp) {
      auto [lo, hi] = std::minmax_element(inst.wf.values.begin(), inst.wf.values.end());
      // Lp grid f_min + i delta in doubles.
      const auto steps = static_cast<std::int64_t>(
          std::ceil((static_cast<double>(*hi) - static_cast<double>(*lo)) / metric.delta - 1e-9));
      if (steps > 1000) fail(ErrorCode::kTooLarge, "Lp oracle grid exceeds 1000 points");
      std::vector<double> points;
      for (std::int64_t i = 0; i <= steps; ++i) {
        points.push_back(static_cast<double>(*lo) + static_cast<double>(i) * metric.delta);
      }
      for (auto x : points) {
        // Nearest rational with denominator 2^20 keeps the grid ordered.
        grid.emplace_back(std::llround(x * 1048576.0), 1048576);
      }
    } else {
      grid = value_grid(inst.wf);
    }
    auto o = oracle_regress(dag, inst.wf, metric, grid);
    if (metric.kind == Metric::Kind::kLp) {
      for (const auto& v : o.assignment) r.values.push_back(to_double(v));
      r.error = o.approximate_error;
    } else {
      r.exact = o.assignment;
      for (const auto& v : o.assignment) r.values.push_back(to_double(v));
      r.error = to_double(o.error);
    }
  }
  write_result(flags, metric, r, {{"source", "oracle"}});
  return 0;
}

int run_bench(const Flags& flags) {
  std::mt19937_64 rng(flags.seed);
  const std::size_t n = flags.n;
  if (n == 0) usage_error("--n must be positive");
  std::uniform_int_distribution<std::int64_t> value(0, 1000), weight(1, 1000);
  std::vector<std::int64_t> f(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = value(rng);
    w[i] = weight(rng);
  }
  auto wf = WeightedFunction::make(std::move(f), std::move(w));
  auto metric = metric_of(flags, wf);
  const std::string kind = flags.order == "auto" ? "dag" : flags.order;
  RegressOptions options;
  options.partition.weight_scale = static_cast<double>(flags.weight_scale);

  auto start = std::chrono::steady_clock::now();
  RegressionResult r;
  if (kind == "chain") {
    r = regress_chain(wf, metric, options);
  } else if (kind == "dag") {
    std::vector<VertexId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::set<Edge> edges;
    const std::size_t m = std::min(5 * n, n * (n - 1) / 2);
    while (edges.size() < m) {
      auto a = pick(rng), b = pick(rng);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      edges.emplace(perm[a], perm[b]);
    }
    start = std::chrono::steady_clock::now();
    r = regress(Order::from_dag(Dag::from_edges(n, {edges.begin(), edges.end()})), wf, metric,
                options);
  } else if (kind == "points") {
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    std::vector<double> coords(n * 3);
    for (auto& c : coords) c = coord(rng);
    start = std::chrono::steady_clock::now();
    r = regress(Order::from_points(PointSet::from_coordinates(n, 3, coords), strategy_of(flags)),
                wf, metric, options);
  } else {
    usage_error("bench supports --order dag, chain or points");
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Output out(flags.output);
  auto& os = out.stream();
  const auto& d = r.diagnostics;
  os << "# bench order=" << kind << " n=" << n << " metric=" << metric.name()
     << " seed=" << flags.seed << "\n";
  os << "# bench seconds=" << secs << "\n";
  os << "error " << metric.name() << " " << format_real(r.error) << "\n";
  os << "# diag n_hat=" << d.n_hat << " m_hat=" << d.m_hat << " steiner_count=" << d.steiner_count
     << " subproblems=" << d.subproblems << " pruned=" << d.pruned << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isotonic regression over partial orders"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<CLI::Option*> lp_only;

  auto common = [&](CLI::App* sub, bool with_metric) {
    if (with_metric) {
      sub->add_option("--metric", flags.metric, "l0, l1, l2 or lp")
          ->check(CLI::IsMember({"l0", "l1", "l2", "lp"}));
      lp_only.push_back(sub->add_option("--p", flags.p, "exponent for --metric lp"));
      lp_only.push_back(sub->add_option("--delta", flags.delta, "grid step for --metric lp"));
      sub->add_option("--weight-scale", flags.weight_scale,
                      "integer scale of Lp derivative weights")
          ->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 52));
    }
    sub->add_option("--order", flags.order, "dag, chain, points, boxes or auto")
        ->check(CLI::IsMember({"dag", "chain", "points", "boxes", "auto"}));
    sub->add_option("--violator", flags.violator, "closure, rendezvous or auto")
        ->check(CLI::IsMember({"closure", "rendezvous", "auto"}));
    sub->add_option("--output", flags.output, "output path (default stdout)");
    sub->add_option("--format", flags.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
  };
  auto* regress_cmd = app.add_subcommand("regress", "compute an isotonic regression");
  common(regress_cmd, true);
  regress_cmd->add_option("--input", flags.input, "instance file (default stdin)");
  auto* violator_cmd = app.add_subcommand("violator", "build the violator dag");
  common(violator_cmd, false);
  violator_cmd->add_option("--input", flags.input, "instance file (default stdin)");
  violator_cmd->add_flag("--stats", flags.stats, "print sizes only");
  auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive reference for tiny instances");
  common(oracle_cmd, true);
  oracle_cmd->add_option("--input", flags.input, "instance file (default stdin)");
  auto* bench_cmd = app.add_subcommand("bench", "time a random instance");
  common(bench_cmd, true);
  bench_cmd->add_option("--seed", flags.seed, "random seed");
  bench_cmd->add_option("--n", flags.n, "vertex count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "isoreg-error: " << e.what() << "\n";
    return 2;
  }

  try {
    for (const auto* opt : lp_only) {
      if (flags.metric != "lp" && opt->count() > 0) {
        usage_error("--p and --delta apply to --metric lp only");
      }
    }
    if (*regress_cmd) return run_regress(flags);
    if (*violator_cmd) return run_violator(flags);
    if (*oracle_cmd) return run_oracle(flags);
    return run_bench(flags);
  } catch (const ExitError& e) {
    std::cerr << "isoreg-error: " << e.what() << "\n";
    return e.code();
  } catch (const Error& e) {
    std::cerr << "isoreg-error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::kTooLarge: return 3;
      case ErrorCode::kExtractionMismatch:
      case ErrorCode::kNotAntichain: return 1;
      default: return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "isoreg-error: " << e.what() << "\n";
    return 1;
  }
}
