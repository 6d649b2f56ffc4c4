#pragma once

#include <span>
#include <vector>

#include "circlot/ground_cost.hpp"
#include "circlot/histogram.hpp"

namespace circlot {

enum class Units { Bins, Perimeter };

/// Monotone (circularly monotone after one cut) quantile-level mapping
/// from a source distribution onto a target distribution.
///
/// Each segment couples the source mass in quantile range [q0,q1) sitting
/// on the source atom at src_atom with the target atom at dst_atom.
/// dst positions live on the universal cover (unwrapped by the optimal
/// cut), so dst_atom - src_atom is the signed displacement actually paid.
/// [sx0,sx1) and [dx0,dx1) are the sub-atom position intervals used for
/// interpolated application (zero-width for point atoms).
class TransferMap {
 public:
  struct Segment {
    double q0, q1;
    double src_atom, dst_atom;
    double sx0, sx1;
    double dx0, dx1;
  };

  TransferMap() = default;
  TransferMap(std::vector<Segment> segments, double alpha, Topology topology);

  /// Histogram-resolution map: the whole atom containing x goes to the
  /// image of its quantile midpoint.
  double apply(double x) const;
  /// Sub-atom resolution: x at fraction t through its atom's quantile
  /// interval maps to the same fraction through the image interval.
  double apply_interpolated(double x) const;

  std::span<const Segment> segments() const& { return segments_; }
  std::span<const Segment> segments() && = delete;  // would dangle
  /// The quantile shift of the optimal cut (0 for linear maps).
  double alpha() const { return alpha_; }
  Topology topology() const { return topology_; }

  /// Cost of the induced coupling: sum of mass * h(displacement).
  double transport_cost(const GroundCost& cost, Units units, std::size_t n_bins) const;

  /// Mass pushed onto each target bin (histogram maps only).
  std::vector<double> pushforward(std::size_t n_bins) const;

 private:
  const Segment& segment_at_quantile(double q) const;

  std::vector<Segment> segments_;
  double alpha_ = 0.0;
  Topology topology_ = Topology::Linear;
};

}  // namespace circlot
