// Small tour of the library: a dag, a chain and a point set.
#include <cstdio>
#include <vector>

#include "isoreg/isoreg.hpp"

using namespace isoreg;

namespace {

void show(const char* label, const RegressionResult& r) {
  std::printf("%-24s error=%-10s values:", label, format_real(r.error).c_str());
  for (std::size_t v = 0; v < r.values.size(); ++v) {
    std::printf(" %s", r.exact.empty() ? format_real(r.values[v]).c_str()
                                       : format_rational(r.exact[v]).c_str());
  }
  std::printf("\n");
}

}  // namespace

int main() {
  // Diamond 0 < {1, 2} < 3 with f decreasing along every path.
  auto diamond = Dag::from_edges(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  auto wf = WeightedFunction::unweighted({3, 1, 2, 0});
  for (auto metric : {Metric::l0(), Metric::l1(), Metric::l2(), Metric::lp(3.0, 0.01)}) {
    auto r = regress(diamond, wf, metric);
    if (!isotonic_check(diamond, r.values).empty()) return 1;
    show(("diamond " + metric.name()).c_str(), r);
  }

  // Chains take the linear-time paths.
  auto chain = WeightedFunction::make({1, 3, 2, 4}, {1, 1, 5, 1});
  show("chain l2", regress_chain(chain, Metric::l2()));
  show("chain l0", regress_chain(chain, Metric::l0()));

  // Points in the plane under domination, solved through Steiner violator dags.
  std::vector<double> xy = {0, 0, 1, 0, 0, 1, 2, 2, 3, 1};
  auto order = Order::from_points(PointSet::from_coordinates(5, 2, xy),
                                  ViolatorStrategy::kRendezvous);
  auto pts = WeightedFunction::make({4, 3, 1, 0, 5}, {1, 2, 1, 1, 1});
  auto r = regress(order, pts, Metric::l1());
  show("points l1", r);
  std::printf("violator vertices=%zu edges=%zu steiner=%zu\n", r.diagnostics.n_hat,
              r.diagnostics.m_hat, r.diagnostics.steiner_count);
  return 0;
}
