#include "circlot/line_ot.hpp"

#include <cmath>
#include <stdexcept>

#include "ot_detail.hpp"

namespace circlot {

namespace {

void require_convex(const GroundCost& cost) {
  if (!cost.is_convex_increasing())
    throw std::invalid_argument("use exact_oracle for concave costs");
}

void require_linear(Topology topology, const char* what) {
  if (topology != Topology::Linear)
    throw std::invalid_argument(std::string(what) + " requires linear topology");
}

double root_of(double raw, const GroundCost& cost) {
  double lambda = cost.power_exponent();
  return lambda == 1.0 ? raw : std::pow(raw, 1.0 / lambda);
}

}  // namespace

double mk_line(const Histogram& f, const Histogram& g, const GroundCost& cost, Units units) {
  require_convex(cost);
  require_linear(f.topology, "mk_line");
  require_linear(g.topology, "mk_line");
  require_linear(cost.topology(), "mk_line cost");
  double gap_scale = 1.0;
  if (units == Units::Bins) {
    if (f.size() != g.size())
      throw std::invalid_argument("bin units require equal bin counts");
    gap_scale = static_cast<double>(f.size());
  }
  auto fn = ensure_normalized(f);
  auto gn = ensure_normalized(g);
  return detail::sweep_cost(cumulative(fn), cumulative(gn), cost, 0.0, gap_scale, false);
}

double mk_line(const PointMassDistribution& f, const PointMassDistribution& g,
               const GroundCost& cost) {
  require_convex(cost);
  require_linear(cost.topology(), "mk_line cost");
  auto fn = ensure_normalized(f);
  auto gn = ensure_normalized(g);
  return detail::sweep_cost(cumulative(fn), cumulative(gn), cost, 0.0, 1.0, false);
}

double mk_line_distance(const Histogram& f, const Histogram& g, const GroundCost& cost,
                        Units units) {
  return root_of(mk_line(f, g, cost, units), cost);
}

double mk_line_distance(const PointMassDistribution& f, const PointMassDistribution& g,
                        const GroundCost& cost) {
  return root_of(mk_line(f, g, cost), cost);
}

double emd_line_histograms(const Histogram& f, const Histogram& g) {
  if (f.size() != g.size()) throw std::invalid_argument("mismatched bin counts");
  require_linear(f.topology, "emd_line_histograms");
  require_linear(g.topology, "emd_line_histograms");
  auto fn = ensure_normalized(f);
  auto gn = ensure_normalized(g);
  auto fc = prefix_sums(fn);
  auto gc = prefix_sums(gn);
  double total = 0.0;
  for (std::size_t i = 0; i < fc.size(); ++i) total += std::abs(fc[i] - gc[i]);
  return total;
}

TransferMap monotone_transfer_map(const Histogram& f_source, const Histogram& f_target) {
  require_linear(f_source.topology, "monotone_transfer_map");
  require_linear(f_target.topology, "monotone_transfer_map");
  auto u = ensure_normalized(f_source);
  auto t = ensure_normalized(f_target);
  return detail::build_transfer_map(cumulative(u), 1.0 / static_cast<double>(u.size()),
                                    cumulative(t), 1.0 / static_cast<double>(t.size()), 0.0,
                                    0.0, Topology::Linear, false);
}

TransferMap monotone_transfer_map(const PointMassDistribution& f_source,
                                  const PointMassDistribution& f_target) {
  auto u = ensure_normalized(f_source);
  auto t = ensure_normalized(f_target);
  return detail::build_transfer_map(cumulative(u), 0.0, cumulative(t), 0.0, 0.0, 0.0,
                                    Topology::Linear, false);
}

}  // namespace circlot
