#include "ot_detail.hpp"

namespace circlot::detail {

StepDiff cumulative_difference_steps(const CumulativeFunction& f, const CumulativeFunction& g) {
  auto fp = f.breakpoints();
  auto fc = f.values();
  auto gp = g.breakpoints();
  auto gc = g.values();

  StepDiff out;
  out.values.reserve(fp.size() + gp.size() + 1);
  out.lengths.reserve(fp.size() + gp.size() + 1);

  std::size_t i = 0, j = 0;
  double x = 0.0;
  double running_f = 0.0, running_g = 0.0;
  while (x < 1.0) {
    // D is constant on [x, next), where next is the closest atom beyond x
    double next = 1.0;
    if (i < fp.size()) next = std::min(next, fp[i]);
    if (j < gp.size()) next = std::min(next, gp[j]);
    if (next > x) {
      out.values.push_back(running_f - running_g);
      out.lengths.push_back(next - x);
    }
    x = next;
    if (x >= 1.0) break;
    while (i < fp.size() && fp[i] <= x) running_f = fc[i++];
    while (j < gp.size() && gp[j] <= x) running_g = gc[j++];
  }
  return out;
}

double sweep_cost(const CumulativeFunction& f, const CumulativeFunction& t,
                  const GroundCost& cost, double alpha, double gap_scale,
                  bool periodic_target) {
  auto fp = f.breakpoints();
  auto tp = t.breakpoints();
  double total = 0.0;
  sweep_pairing(f, t, alpha, periodic_target,
                [&](double q0, double q1, std::size_t i, std::size_t j, double k) {
                  double gap = std::abs(fp[i] - (tp[j] + k));
                  total += (q1 - q0) * cost.apply(gap_scale * gap);
                });
  return total;
}

}  // namespace circlot::detail
