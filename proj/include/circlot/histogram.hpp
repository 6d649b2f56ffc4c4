#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace circlot {

enum class Topology { Linear, Circular };

/// Nonnegative weights on N uniform bins. Bin i of an N-bin histogram
/// carries its mass at position i/N on the perimeter-1 circle.
struct Histogram {
  std::vector<double> weights;
  Topology topology = Topology::Circular;

  Histogram() = default;
  Histogram(std::vector<double> w, Topology t);

  std::size_t size() const { return weights.size(); }
  double total() const;
  bool is_normalized(double tol = 1e-9) const;
};

/// Weighted point masses on the perimeter-1 circle. Positions live in
/// [0,1) and need not be distinct or sorted; masses are strictly positive.
struct PointMassDistribution {
  std::vector<double> points;
  std::vector<double> masses;

  PointMassDistribution() = default;
  PointMassDistribution(std::vector<double> pts, std::vector<double> ms);

  std::size_t size() const { return points.size(); }
  double total() const;
  bool is_normalized(double tol = 1e-9) const;
};

/// Left-continuous cumulative step function F with the periodic extension
/// F(y+1) = F(y) + total. values[j] is the cumulative mass through the
/// atom at breakpoints[j], i.e. the right limit F(breakpoints[j]+).
class CumulativeFunction {
 public:
  CumulativeFunction() = default;
  // Atoms are sorted, coalesced at equal positions; zero masses dropped.
  CumulativeFunction(std::vector<double> positions, std::vector<double> masses);

  /// F(y) = mass strictly left of y, extended periodically over the reals.
  double operator()(double y) const;
  /// Right limit F(y+) = mass at or left of y.
  double value_after(double y) const;
  /// F^{-1}(y) = inf{t : F(t) > y}, extended by F^{-1}(y + total) = F^{-1}(y) + 1.
  double pseudo_inverse(double y) const;

  double total() const { return total_; }
  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> values() const { return values_; }
  /// Jump size at breakpoint j.
  double mass_at(std::size_t j) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  double total_ = 0.0;
};

CumulativeFunction cumulative(const Histogram& f);
CumulativeFunction cumulative(const PointMassDistribution& f);

inline double pseudo_inverse(const CumulativeFunction& f, double y) {
  return f.pseudo_inverse(y);
}

/// Cumulative of a circular histogram restarted at bin k (the F_k of the
/// min-over-cuts formula): breakpoints are rebased to bin-k-relative
/// positions and values accumulate cyclically from bin k.
CumulativeFunction shifted_cumulative(const Histogram& f, std::size_t k);

/// Same values as shifted_cumulative, indexed cyclically from bin k:
/// element r is the mass of bins k..k+r (mod N).
std::vector<double> shifted_cumulative_values(const Histogram& f, std::size_t k);

/// F_x(y) = F(x+y) - F(x): the cumulative re-based at reference point x.
CumulativeFunction x_cumulative(const CumulativeFunction& f, double x);

Histogram normalize(const Histogram& f);
PointMassDistribution normalize(const PointMassDistribution& f);

/// Cyclic shift by k bins; circular topology only.
Histogram rotate(const Histogram& f, std::size_t k);

/// Returns a unit-mass copy, emitting a warning if the total deviated from
/// 1 by more than 1e-9. Zero total mass is an error.
Histogram ensure_normalized(const Histogram& f);
PointMassDistribution ensure_normalized(const PointMassDistribution& f);

/// Inclusive prefix sums F[i] = f[0] + ... + f[i].
std::vector<double> prefix_sums(const Histogram& f);

}  // namespace circlot
