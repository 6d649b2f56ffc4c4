#pragma once

#include <span>

#include "circlot/ground_cost.hpp"
#include "circlot/histogram.hpp"
#include "circlot/transfer_map.hpp"

namespace circlot {

/// The objective of the circular formula: the quantile integral of
/// h(|F^{-1}(t) - (G - alpha)^{-1}(t)|) evaluated with the periodic
/// extension. Convex and piecewise affine in alpha.
double phi(const Histogram& f, const Histogram& g, const GroundCost& cost, double alpha,
           Units units = Units::Bins);
double phi(const PointMassDistribution& f, const PointMassDistribution& g,
           const GroundCost& cost, double alpha);

struct CircleMkResult {
  double cost;   // min over alpha of phi
  double alpha;  // minimizer: the quantile shift of the optimal cut
};

/// Minimum of phi over alpha in [-1,1]. For lambda = 1 the minimizer is
/// the weighted median of F - G (exact, linear time); otherwise a
/// golden-section search shrinks the bracket below epsilon and the
/// finitely many kinks of phi inside it are swept exactly.
CircleMkResult mk_circle_with_alpha(const Histogram& f, const Histogram& g,
                                    const GroundCost& cost, double epsilon = 1e-9,
                                    Units units = Units::Bins);
CircleMkResult mk_circle_with_alpha(const PointMassDistribution& f,
                                    const PointMassDistribution& g, const GroundCost& cost,
                                    double epsilon = 1e-9);

double mk_circle(const Histogram& f, const Histogram& g, const GroundCost& cost,
                 double epsilon = 1e-9, Units units = Units::Bins);
double mk_circle(const PointMassDistribution& f, const PointMassDistribution& g,
                 const GroundCost& cost, double epsilon = 1e-9);

/// (mk_circle)^{1/lambda}.
double mk_circle_distance(const Histogram& f, const Histogram& g, const GroundCost& cost,
                          double epsilon = 1e-9, Units units = Units::Bins);
double mk_circle_distance(const PointMassDistribution& f, const PointMassDistribution& g,
                          const GroundCost& cost, double epsilon = 1e-9);

/// Value m minimizing sum_i w_i |v_i - m|; ties resolved to the smallest
/// minimizing value. Expected linear time.
double weighted_median(std::span<const double> values, std::span<const double> weights);

struct CemdResult {
  double distance;  // bin units
  double mu;        // median of the cumulative differences F[i] - G[i]
};

/// Circular EMD between same-size circular histograms via the median
/// formula ||F - G - mu||_1; O(N) expected time, bin units.
CemdResult cemd_with_mu(const Histogram& f, const Histogram& g);
double cemd(const Histogram& f, const Histogram& g);

/// Reference form: min over the N cut bins k of ||F_k - G_k||_1. O(N^2).
double cemd_bruteforce(const Histogram& f, const Histogram& g);

/// Optimal circular rearrangement of f_source onto f_target, built from
/// the median mu of {H_u[i] - H_t[i]}: source quantile q is sent to
/// target quantile q - mu.
TransferMap circular_transfer_map(const Histogram& f_source, const Histogram& f_target);

/// Same construction at the optimal shift for an arbitrary convex cost
/// (power:1 reduces to the median map above).
TransferMap circular_transfer_map(const Histogram& f_source, const Histogram& f_target,
                                  const GroundCost& cost, double epsilon = 1e-9);

}  // namespace circlot
