#pragma once

#include "circlot/ground_cost.hpp"
#include "circlot/histogram.hpp"
#include "circlot/transfer_map.hpp"

namespace circlot {

/// Optimal transport cost on the line for a convex increasing cost:
/// the integral of h(|F^{-1} - G^{-1}|) over quantile levels, computed
/// exactly by merging the two quantile level sets.
double mk_line(const Histogram& f, const Histogram& g, const GroundCost& cost,
               Units units = Units::Bins);
double mk_line(const PointMassDistribution& f, const PointMassDistribution& g,
               const GroundCost& cost);

/// MK_lambda = (mk_line)^{1/lambda}; the metric normalization.
double mk_line_distance(const Histogram& f, const Histogram& g, const GroundCost& cost,
                        Units units = Units::Bins);
double mk_line_distance(const PointMassDistribution& f, const PointMassDistribution& g,
                        const GroundCost& cost);

/// Linear EMD between same-size linear histograms: the L1 norm of the
/// difference of cumulative histograms, in bin units.
double emd_line_histograms(const Histogram& f, const Histogram& g);

/// Monotone rearrangement of f_source onto f_target (histogram
/// specification): m(x) = H_t^{-1}(H_u(x)).
TransferMap monotone_transfer_map(const Histogram& f_source, const Histogram& f_target);
TransferMap monotone_transfer_map(const PointMassDistribution& f_source,
                                  const PointMassDistribution& f_target);

}  // namespace circlot
