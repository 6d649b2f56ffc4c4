#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "circlot/ground_cost.hpp"
#include "circlot/histogram.hpp"
#include "circlot/transfer_map.hpp"

namespace circlot::detail {

/// F - G as a step function on [0,1): constant values and the lengths of
/// the intervals they live on.
struct StepDiff {
  std::vector<double> values;
  std::vector<double> lengths;
};

StepDiff cumulative_difference_steps(const CumulativeFunction& f, const CumulativeFunction& g);

/// Walks the coupling that pairs source quantile level q with target
/// level q + alpha, emitting one call per constant piece:
///   emit(q0, q1, i, j, k)
/// where i is the active source atom, j the active target atom and k the
/// integer cover offset of the target (0 when not periodic). The target
/// side is read through the periodic extension iff periodic_target;
/// otherwise alpha must be 0.
template <class Emit>
void sweep_pairing(const CumulativeFunction& f, const CumulativeFunction& t, double alpha,
                   bool periodic_target, Emit&& emit) {
  auto fc = f.values();
  auto tc = t.values();
  const std::size_t n = fc.size(), m = tc.size();
  const double inf = std::numeric_limits<double>::infinity();

  double k = 0.0;
  std::size_t j = 0;
  if (periodic_target) {
    k = std::floor(alpha);
    double s0 = alpha - k;
    if (s0 >= 1.0) {
      s0 -= 1.0;
      k += 1.0;
    }
    j = static_cast<std::size_t>(std::upper_bound(tc.begin(), tc.end(), s0) - tc.begin());
    // the last atom's level is read as exactly the full mass, so s0 in
    // [0,1) always lands inside some atom even when the cumulative sums
    // carry round-off
    if (j == m) j = m - 1;
  }

  std::size_t i = 0;
  double q = 0.0;
  while (q < 1.0) {
    double f_end = (i + 1 < n) ? fc[i] : inf;
    double t_end;
    if (periodic_target) {
      t_end = (j + 1 < m ? tc[j] : 1.0) + k - alpha;
    } else {
      t_end = (j + 1 < m) ? tc[j] : inf;
    }
    double seg_end = std::min({f_end, t_end, 1.0});
    if (seg_end > q) emit(q, seg_end, i, j, k);
    q = seg_end;
    if (q >= 1.0) break;
    if (f_end <= q) ++i;
    if (t_end <= q) {
      ++j;
      if (periodic_target && j == m) {
        j = 0;
        k += 1.0;
      }
    }
  }
}

/// The quantile transport integral of h(gap_scale * |F^-1 - (G-alpha)^-1|).
double sweep_cost(const CumulativeFunction& f, const CumulativeFunction& t,
                  const GroundCost& cost, double alpha, double gap_scale, bool periodic_target);

/// Builds the quantile-level map pairing source level q with target level
/// q + alpha_phi. bin_width is 1/N for histogram atoms, 0 for point
/// atoms. report_alpha is stored as the map's alpha().
TransferMap build_transfer_map(const CumulativeFunction& u, double u_bin_width,
                               const CumulativeFunction& t, double t_bin_width,
                               double alpha_phi, double report_alpha, Topology topology,
                               bool periodic_target);

}  // namespace circlot::detail
