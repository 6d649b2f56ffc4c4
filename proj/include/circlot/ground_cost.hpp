#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "circlot/histogram.hpp"

namespace circlot {

/// h(t) = t^lambda, lambda >= 1.
struct ConvexPower {
  double lambda = 1.0;
};

/// h(t) = 1 - exp(-t/tau), tau > 0.
struct Exponential {
  double tau = 1.0;
};

/// h(t) = min(t, threshold).
struct Thresholded {
  double threshold = 2.0;
};

/// h(t) = 1 if t != 0 else 0.
struct ZeroOne {};

/// Ground cost c(x,y) = h(d(x,y)) with d the geodesic distance on the
/// circle or |x-y| on the line, depending on the topology tag.
class GroundCost {
 public:
  using Variant = std::variant<ConvexPower, Exponential, Thresholded, ZeroOne>;

  GroundCost(Variant v, Topology topology);

  static GroundCost power(double lambda, Topology topology);
  static GroundCost exponential(double tau, Topology topology);
  static GroundCost thresholded(double threshold, Topology topology);
  static GroundCost zero_one(Topology topology);

  /// Parses the CLI syntax "power:L | exp:TAU | thresh:T | zeroone".
  static GroundCost parse(std::string_view text, Topology topology);

  /// c(x,y) for positions in [0,1).
  double operator()(double x, double y) const;
  /// c(i,j) in bin units for an n_bins histogram grid.
  double bins(std::size_t i, std::size_t j, std::size_t n_bins) const;
  /// h applied to a raw ground distance.
  double apply(double distance) const;

  /// True exactly for ConvexPower (the dispatch predicate of the
  /// quantile-based fast paths).
  bool is_convex_increasing() const;
  /// Exponent for ConvexPower, 1.0 otherwise (concave MK costs are
  /// distances themselves, no root is taken).
  double power_exponent() const;

  Topology topology() const { return topology_; }
  const Variant& variant() const { return variant_; }
  std::string name() const;

 private:
  Variant variant_;
  Topology topology_;
};

/// d(x,y) = min(|x-y|, 1-|x-y|) on the perimeter-1 circle.
double geodesic_distance(double x, double y);

/// min(|i-j|, N-|i-j|) for circular bins, |i-j| for linear.
double bin_distance(std::size_t i, std::size_t j, std::size_t n_bins, Topology topology);

inline double evaluate(const GroundCost& cost, double x, double y) {
  return cost(x, y);
}
inline bool is_convex_increasing(const GroundCost& cost) {
  return cost.is_convex_increasing();
}

}  // namespace circlot
