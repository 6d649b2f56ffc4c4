#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "circlot/ground_cost.hpp"
#include "circlot/histogram.hpp"
#include "circlot/transfer_map.hpp"

namespace circlot {

/// Sparse coupling matrix with prescribed marginals.
struct TransportPlan {
  struct Entry {
    std::size_t source, target;
    double flow;
  };
  std::vector<Entry> entries;
  std::vector<double> source_marginals;
  std::vector<double> target_marginals;

  double flow_at(std::size_t i, std::size_t j) const;
  /// Row/column sums recomputed from the entries.
  std::vector<double> row_sums() const;
  std::vector<double> column_sums() const;
};

struct TransportSolution {
  double cost = 0.0;
  TransportPlan plan;
  // Final node potentials; optimality certificate: c(i,j) - u[i] + v[j] >= 0.
  std::vector<double> source_potentials;
  std::vector<double> target_potentials;
};

struct TransportOptions {
  std::size_t max_entries = 1'000'000;  // cap on N*M
  double feasibility_tol = 1e-9;
  double flow_prune = 1e-12;  // flows below this are dropped from the plan
};

/// Exact transportation optimum via successive shortest paths with node
/// potentials on the dense bipartite network. Supplies and demands must
/// have equal totals; they are taken as given (no renormalization).
TransportSolution solve_transport_arrays(const std::vector<double>& supply,
                                         const std::vector<double>& demand,
                                         const std::vector<std::vector<double>>& cost_matrix,
                                         const TransportOptions& options = {});

TransportSolution solve_transport(const Histogram& f, const Histogram& g,
                                  const GroundCost& cost, Units units = Units::Bins,
                                  const TransportOptions& options = {});
TransportSolution solve_transport(const PointMassDistribution& f,
                                  const PointMassDistribution& g, const GroundCost& cost,
                                  const TransportOptions& options = {});

struct AssignmentResult {
  double cost = 0.0;  // (1/P) * sum of pair costs
  std::vector<std::size_t> permutation;
};

/// Optimal point-to-point assignment; exhaustive scan for P <= 10,
/// Hungarian method above.
AssignmentResult solve_assignment(const std::vector<double>& xs, const std::vector<double>& ys,
                                  const GroundCost& cost);
AssignmentResult solve_assignment_exhaustive(const std::vector<double>& xs,
                                             const std::vector<double>& ys,
                                             const GroundCost& cost);
AssignmentResult solve_assignment_hungarian(const std::vector<double>& xs,
                                            const std::vector<double>& ys,
                                            const GroundCost& cost);

/// All permutations whose cost is within tol of the optimum (exhaustive;
/// intended for small P).
std::vector<std::vector<std::size_t>> enumerate_optimal_assignments(
    const std::vector<double>& xs, const std::vector<double>& ys, const GroundCost& cost,
    double tol = 1e-12);

/// MK cost for concave ground costs: ZeroOne in closed form, Exponential
/// and Thresholded through the exact solver after removing shared mass.
double mk_concave(const Histogram& f, const Histogram& g, const GroundCost& cost,
                  Units units = Units::Bins);

/// Same, with the optimal plan re-assembled in the full frame (shared
/// mass explicitly on the diagonal).
TransportSolution mk_concave_with_plan(const Histogram& f, const Histogram& g,
                                       const GroundCost& cost, Units units = Units::Bins);

/// Open geodesic arc between two circle points; antipodal pairs take the
/// positive (trigonometric) direction.
struct GeodesicArc {
  double from = 0.0, to = 0.0;
  bool positive = true;
  double length = 0.0;

  static GeodesicArc between(double x, double y);
  /// Interior membership (the arc excludes its endpoints).
  bool contains(double p) const;
  /// Set containment of another arc's interior in this one's.
  bool contains(const GeodesicArc& other) const;
  bool intersects(const GeodesicArc& other) const;
};

/// A circle position crossed by no arc gamma(x_l, y_sigma(l)) of the
/// assignment, if one exists. Points must be pairwise distinct.
std::optional<double> find_uncrossed_point(const std::vector<double>& xs,
                                           const std::vector<double>& ys,
                                           const std::vector<std::size_t>& sigma);

}  // namespace circlot
