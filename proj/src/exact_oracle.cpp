#include "circlot/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace circlot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct CostMatrixAdapter {
  const std::vector<std::vector<double>>& c;
  double operator()(std::size_t i, std::size_t j) const { return c[i][j]; }
};

}  // namespace

double TransportPlan::flow_at(std::size_t i, std::size_t j) const {
  double total = 0.0;
  for (const auto& e : entries)
    if (e.source == i && e.target == j) total += e.flow;
  return total;
}

std::vector<double> TransportPlan::row_sums() const {
  std::vector<double> out(source_marginals.size(), 0.0);
  for (const auto& e : entries) out[e.source] += e.flow;
  return out;
}

std::vector<double> TransportPlan::column_sums() const {
  std::vector<double> out(target_marginals.size(), 0.0);
  for (const auto& e : entries) out[e.target] += e.flow;
  return out;
}

TransportSolution solve_transport_arrays(const std::vector<double>& supply,
                                         const std::vector<double>& demand,
                                         const std::vector<std::vector<double>>& cost_matrix,
                                         const TransportOptions& options) {
  const std::size_t n = supply.size(), m = demand.size();
  if (n == 0 || m == 0) throw std::invalid_argument("empty distribution");
  if (n * m > options.max_entries)
    throw std::invalid_argument("transport problem exceeds the size cap");
  if (cost_matrix.size() != n)
    throw std::invalid_argument("cost matrix shape mismatch");
  for (const auto& row : cost_matrix)
    if (row.size() != m) throw std::invalid_argument("cost matrix shape mismatch");

  double total_supply = std::accumulate(supply.begin(), supply.end(), 0.0);
  double total_demand = std::accumulate(demand.begin(), demand.end(), 0.0);
  if (std::abs(total_supply - total_demand) > options.feasibility_tol)
    throw std::invalid_argument("infeasible: supply and demand totals differ");

  const double active_tol = 1e-13 * std::max(1.0, total_supply);
  std::vector<double> supply_rem = supply, demand_rem = demand;
  std::vector<double> flow(n * m, 0.0);
  auto flow_at = [&](std::size_t i, std::size_t j) -> double& { return flow[i * m + j]; };

  const std::size_t v_count = n + m;
  std::vector<double> potential(v_count, 0.0);
  std::vector<double> dist(v_count);
  std::vector<std::size_t> hops(v_count);
  std::vector<int> parent(v_count);
  std::vector<char> done(v_count);

  auto has_active = [&](const std::vector<double>& r) {
    for (double v : r)
      if (v > active_tol) return true;
    return false;
  };

  std::size_t guard = 4 * (n + m) * (n + m) + 64;
  while (has_active(supply_rem) && has_active(demand_rem)) {
    if (guard-- == 0) throw std::runtime_error("transport solver failed to converge");

    // Dijkstra over reduced costs from all active sources; ties on
    // distance are broken toward fewer arcs, which keeps zero-cost
    // direct flow in place when an equal-cost detour exists.
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(hops.begin(), hops.end(), std::numeric_limits<std::size_t>::max());
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (supply_rem[i] > active_tol) {
        dist[i] = 0.0;
        hops[i] = 0;
      }
    }

    std::size_t target = v_count;
    for (;;) {
      std::size_t u = v_count;
      for (std::size_t v = 0; v < v_count; ++v) {
        if (done[v] || dist[v] == kInf) continue;
        if (u == v_count || dist[v] < dist[u] || (dist[v] == dist[u] && hops[v] < hops[u]))
          u = v;
      }
      if (u == v_count) break;
      done[u] = 1;
      if (u >= n && demand_rem[u - n] > active_tol) {
        target = u;
        break;
      }
      if (u < n) {
        for (std::size_t j = 0; j < m; ++j) {
          std::size_t v = n + j;
          if (done[v]) continue;
          double w = cost_matrix[u][j] + potential[u] - potential[v];
          if (w < 0.0) w = 0.0;
          double nd = dist[u] + w;
          std::size_t nh = hops[u] + 1;
          if (nd < dist[v] || (nd == dist[v] && nh < hops[v])) {
            dist[v] = nd;
            hops[v] = nh;
            parent[v] = static_cast<int>(u);
          }
        }
      } else {
        std::size_t j = u - n;
        for (std::size_t i = 0; i < n; ++i) {
          if (done[i] || flow_at(i, j) <= 0.0) continue;
          double w = -cost_matrix[i][j] + potential[u] - potential[i];
          if (w < 0.0) w = 0.0;
          double nd = dist[u] + w;
          std::size_t nh = hops[u] + 1;
          if (nd < dist[i] || (nd == dist[i] && nh < hops[i])) {
            dist[i] = nd;
            hops[i] = nh;
            parent[i] = static_cast<int>(u);
          }
        }
      }
    }
    if (target == v_count) throw std::runtime_error("transport solver: no augmenting path");

    double reach = dist[target];
    for (std::size_t v = 0; v < v_count; ++v)
      potential[v] += std::min(dist[v], reach);

    // bottleneck along the augmenting path
    double amount = demand_rem[target - n];
    for (std::size_t v = target; parent[v] >= 0; v = static_cast<std::size_t>(parent[v])) {
      auto pv = static_cast<std::size_t>(parent[v]);
      if (v >= n) {
        if (parent[pv] < 0) amount = std::min(amount, supply_rem[pv]);
      } else {
        amount = std::min(amount, flow_at(v, pv - n));
      }
    }
    for (std::size_t v = target; parent[v] >= 0; v = static_cast<std::size_t>(parent[v])) {
      auto pv = static_cast<std::size_t>(parent[v]);
      if (v >= n)
        flow_at(pv, v - n) += amount;
      else
        flow_at(v, pv - n) -= amount;
    }
    std::size_t path_source = target;
    while (parent[path_source] >= 0) path_source = static_cast<std::size_t>(parent[path_source]);
    supply_rem[path_source] -= amount;
    demand_rem[target - n] -= amount;
  }

  TransportSolution out;
  out.plan.source_marginals = supply;
  out.plan.target_marginals = demand;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (flow_at(i, j) > options.flow_prune) {
        out.plan.entries.push_back({i, j, flow_at(i, j)});
        out.cost += flow_at(i, j) * cost_matrix[i][j];
      }
    }
  }
  out.source_potentials.resize(n);
  out.target_potentials.resize(m);
  for (std::size_t i = 0; i < n; ++i) out.source_potentials[i] = -potential[i];
  for (std::size_t j = 0; j < m; ++j) out.target_potentials[j] = -potential[n + j];
  return out;
}

namespace {

struct NodeSet {
  std::vector<std::size_t> index;  // original bin index per node
  std::vector<double> mass;
};

NodeSet nonzero_nodes(const std::vector<double>& weights) {
  NodeSet out;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) {
      out.index.push_back(i);
      out.mass.push_back(weights[i]);
    }
  }
  return out;
}

// Lifts a solution on pruned node sets back to original bin indices. The
// potentials of zero-mass bins are chosen to keep every reduced cost
// nonnegative, so the duality certificate covers the full index range.
template <class CostFn>
TransportSolution lift(TransportSolution sol, const NodeSet& src, const NodeSet& snk,
                       std::vector<double> f_marginals, std::vector<double> g_marginals,
                       CostFn&& full_cost) {
  TransportSolution out;
  out.cost = sol.cost;
  out.plan.source_marginals = std::move(f_marginals);
  out.plan.target_marginals = std::move(g_marginals);
  const std::size_t n = out.plan.source_marginals.size();
  const std::size_t m = out.plan.target_marginals.size();
  for (const auto& e : sol.plan.entries)
    out.plan.entries.push_back({src.index[e.source], snk.index[e.target], e.flow});

  out.source_potentials.assign(n, 0.0);
  out.target_potentials.assign(m, 0.0);
  std::vector<char> src_live(n, 0), snk_live(m, 0);
  for (std::size_t a = 0; a < src.index.size(); ++a) {
    out.source_potentials[src.index[a]] = sol.source_potentials[a];
    src_live[src.index[a]] = 1;
  }
  for (std::size_t b = 0; b < snk.index.size(); ++b) {
    out.target_potentials[snk.index[b]] = sol.target_potentials[b];
    snk_live[snk.index[b]] = 1;
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (snk_live[j]) continue;
    double v = -kInf;
    for (std::size_t a = 0; a < src.index.size(); ++a) {
      std::size_t i = src.index[a];
      v = std::max(v, out.source_potentials[i] - full_cost(i, j));
    }
    out.target_potentials[j] = v == -kInf ? 0.0 : v;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (src_live[i]) continue;
    double u = kInf;
    for (std::size_t j = 0; j < m; ++j)
      u = std::min(u, full_cost(i, j) + out.target_potentials[j]);
    out.source_potentials[i] = u == kInf ? 0.0 : u;
  }
  return out;
}

}  // namespace

TransportSolution solve_transport(const Histogram& f, const Histogram& g,
                                  const GroundCost& cost, Units units,
                                  const TransportOptions& options) {
  auto fn = ensure_normalized(f);
  auto gn = ensure_normalized(g);
  std::size_t n_bins = fn.size();
  if (units == Units::Bins && fn.size() != gn.size())
    throw std::invalid_argument("bin units require equal bin counts");

  auto full_cost = [&](std::size_t i, std::size_t j) {
    if (units == Units::Bins) return cost.bins(i, j, n_bins);
    double x = static_cast<double>(i) / static_cast<double>(fn.size());
    double y = static_cast<double>(j) / static_cast<double>(gn.size());
    return cost(x, y);
  };
  auto src = nonzero_nodes(fn.weights);
  auto snk = nonzero_nodes(gn.weights);
  std::vector<std::vector<double>> c(src.index.size(),
                                     std::vector<double>(snk.index.size()));
  for (std::size_t a = 0; a < src.index.size(); ++a)
    for (std::size_t b = 0; b < snk.index.size(); ++b)
      c[a][b] = full_cost(src.index[a], snk.index[b]);
  auto sol = solve_transport_arrays(src.mass, snk.mass, c, options);
  return lift(std::move(sol), src, snk, fn.weights, gn.weights, full_cost);
}

TransportSolution solve_transport(const PointMassDistribution& f,
                                  const PointMassDistribution& g, const GroundCost& cost,
                                  const TransportOptions& options) {
  auto fn = ensure_normalized(f);
  auto gn = ensure_normalized(g);
  std::vector<std::vector<double>> c(fn.size(), std::vector<double>(gn.size()));
  for (std::size_t i = 0; i < fn.size(); ++i)
    for (std::size_t j = 0; j < gn.size(); ++j) c[i][j] = cost(fn.points[i], gn.points[j]);
  auto sol = solve_transport_arrays(fn.masses, gn.masses, c, options);
  sol.plan.source_marginals = fn.masses;
  sol.plan.target_marginals = gn.masses;
  return sol;
}

namespace {

std::vector<std::vector<double>> assignment_costs(const std::vector<double>& xs,
                                                  const std::vector<double>& ys,
                                                  const GroundCost& cost) {
  if (xs.size() != ys.size()) throw std::invalid_argument("unequal point counts");
  if (xs.empty()) throw std::invalid_argument("empty distribution");
  std::vector<std::vector<double>> c(xs.size(), std::vector<double>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) c[i][j] = cost(xs[i], ys[j]);
  return c;
}

double permutation_cost(const std::vector<std::vector<double>>& c,
                        const std::vector<std::size_t>& sigma) {
  double total = 0.0;
  for (std::size_t k = 0; k < sigma.size(); ++k) total += c[k][sigma[k]];
  return total / static_cast<double>(sigma.size());
}

}  // namespace

AssignmentResult solve_assignment_exhaustive(const std::vector<double>& xs,
                                             const std::vector<double>& ys,
                                             const GroundCost& cost) {
  auto c = assignment_costs(xs, ys, cost);
  std::size_t p = xs.size();
  if (p > 10) throw std::invalid_argument("exhaustive assignment is capped at P <= 10");
  std::vector<std::size_t> sigma(p);
  std::iota(sigma.begin(), sigma.end(), 0);
  AssignmentResult best{kInf, sigma};
  do {
    double w = permutation_cost(c, sigma);
    if (w < best.cost) {
      best.cost = w;
      best.permutation = sigma;
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return best;
}

AssignmentResult solve_assignment_hungarian(const std::vector<double>& xs,
                                            const std::vector<double>& ys,
                                            const GroundCost& cost) {
  auto c = assignment_costs(xs, ys, cost);
  const std::size_t p = xs.size();

  // potentials-based Hungarian method, O(P^3)
  std::vector<double> u(p + 1, 0.0), v(p + 1, 0.0);
  std::vector<std::size_t> match(p + 1, 0), way(p + 1, 0);
  for (std::size_t i = 1; i <= p; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(p + 1, kInf);
    std::vector<char> used(p + 1, 0);
    do {
      used[j0] = 1;
      std::size_t i0 = match[j0], j1 = 0;
      double delta = kInf;
      for (std::size_t j = 1; j <= p; ++j) {
        if (used[j]) continue;
        double cur = c[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= p; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  AssignmentResult out;
  out.permutation.assign(p, 0);
  for (std::size_t j = 1; j <= p; ++j) out.permutation[match[j] - 1] = j - 1;
  out.cost = permutation_cost(c, out.permutation);
  return out;
}

AssignmentResult solve_assignment(const std::vector<double>& xs, const std::vector<double>& ys,
                                  const GroundCost& cost) {
  return xs.size() <= 7 ? solve_assignment_exhaustive(xs, ys, cost)
                        : solve_assignment_hungarian(xs, ys, cost);
}

std::vector<std::vector<std::size_t>> enumerate_optimal_assignments(
    const std::vector<double>& xs, const std::vector<double>& ys, const GroundCost& cost,
    double tol) {
  auto c = assignment_costs(xs, ys, cost);
  std::size_t p = xs.size();
  if (p > 10) throw std::invalid_argument("exhaustive assignment is capped at P <= 10");
  std::vector<std::size_t> sigma(p);
  std::iota(sigma.begin(), sigma.end(), 0);
  double best = kInf;
  do {
    best = std::min(best, permutation_cost(c, sigma));
  } while (std::next_permutation(sigma.begin(), sigma.end()));

  std::vector<std::vector<std::size_t>> out;
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    if (permutation_cost(c, sigma) <= best + tol) out.push_back(sigma);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return out;
}

namespace {

struct ReducedParts {
  NodeSet src, snk;       // bins where f > g (resp. g > f) with the excess mass
  std::vector<double> shared;  // min(f, g) per bin
};

ReducedParts shared_mass_reduction(const Histogram& f, const Histogram& g) {
  ReducedParts out;
  out.shared.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    double d = f.weights[i] - g.weights[i];
    out.shared[i] = std::min(f.weights[i], g.weights[i]);
    if (d > 0.0) {
      out.src.index.push_back(i);
      out.src.mass.push_back(d);
    } else if (d < 0.0) {
      out.snk.index.push_back(i);
      out.snk.mass.push_back(-d);
    }
  }
  return out;
}

void require_concave(const GroundCost& cost) {
  if (cost.is_convex_increasing())
    throw std::invalid_argument("convex cost: use circle_ot/line_ot");
}

double concave_bin_cost(const GroundCost& cost, std::size_t i, std::size_t j,
                        std::size_t n_bins, Units units) {
  if (units == Units::Bins) return cost.bins(i, j, n_bins);
  return cost.apply(bin_distance(i, j, n_bins, cost.topology()) /
                    static_cast<double>(n_bins));
}

}  // namespace

double mk_concave(const Histogram& f, const Histogram& g, const GroundCost& cost,
                  Units units) {
  require_concave(cost);
  if (f.size() != g.size()) throw std::invalid_argument("mismatched bin counts");
  // canonical order: degenerate solver tie-breaks must not make the
  // symmetric distance depend on the argument order
  if (std::lexicographical_compare(g.weights.begin(), g.weights.end(), f.weights.begin(),
                                   f.weights.end()))
    return mk_concave(g, f, cost, units);
  auto fn = ensure_normalized(f);
  auto gn = ensure_normalized(g);

  if (std::holds_alternative<ZeroOne>(cost.variant())) {
    double total = 0.0;
    for (std::size_t i = 0; i < fn.size(); ++i)
      total += std::abs(fn.weights[i] - gn.weights[i]);
    return 0.5 * total;
  }

  auto parts = shared_mass_reduction(fn, gn);
  if (parts.src.index.empty()) return 0.0;
  std::vector<std::vector<double>> c(parts.src.index.size(),
                                     std::vector<double>(parts.snk.index.size()));
  for (std::size_t a = 0; a < parts.src.index.size(); ++a)
    for (std::size_t b = 0; b < parts.snk.index.size(); ++b)
      c[a][b] = concave_bin_cost(cost, parts.src.index[a], parts.snk.index[b], fn.size(), units);
  return solve_transport_arrays(parts.src.mass, parts.snk.mass, c).cost;
}

TransportSolution mk_concave_with_plan(const Histogram& f, const Histogram& g,
                                       const GroundCost& cost, Units units) {
  require_concave(cost);
  if (f.size() != g.size()) throw std::invalid_argument("mismatched bin counts");
  auto fn = ensure_normalized(f);
  auto gn = ensure_normalized(g);

  auto parts = shared_mass_reduction(fn, gn);
  TransportSolution out;
  out.plan.source_marginals = fn.weights;
  out.plan.target_marginals = gn.weights;
  out.source_potentials.assign(fn.size(), 0.0);
  out.target_potentials.assign(gn.size(), 0.0);
  for (std::size_t i = 0; i < fn.size(); ++i)
    if (parts.shared[i] > 0.0) out.plan.entries.push_back({i, i, parts.shared[i]});

  if (!parts.src.index.empty()) {
    std::vector<std::vector<double>> c(parts.src.index.size(),
                                       std::vector<double>(parts.snk.index.size()));
    for (std::size_t a = 0; a < parts.src.index.size(); ++a)
      for (std::size_t b = 0; b < parts.snk.index.size(); ++b)
        c[a][b] =
            concave_bin_cost(cost, parts.src.index[a], parts.snk.index[b], fn.size(), units);
    auto sol = solve_transport_arrays(parts.src.mass, parts.snk.mass, c);
    out.cost = sol.cost;
    for (const auto& e : sol.plan.entries)
      out.plan.entries.push_back({parts.src.index[e.source], parts.snk.index[e.target], e.flow});
    for (std::size_t a = 0; a < parts.src.index.size(); ++a)
      out.source_potentials[parts.src.index[a]] = sol.source_potentials[a];
    for (std::size_t b = 0; b < parts.snk.index.size(); ++b)
      out.target_potentials[parts.snk.index[b]] = sol.target_potentials[b];
  }
  return out;
}

GeodesicArc GeodesicArc::between(double x, double y) {
  double forward = y - x;
  forward -= std::floor(forward);
  GeodesicArc arc;
  arc.from = x;
  arc.to = y;
  arc.positive = forward <= 0.5;  // antipodal pairs take the positive direction
  arc.length = std::min(forward, 1.0 - forward);
  return arc;
}

bool GeodesicArc::contains(double p) const {
  if (length == 0.0) return false;
  double rel = positive ? p - from : from - p;
  rel -= std::floor(rel);
  return rel > 0.0 && rel < length;
}

namespace {

// canonical representation: open interval (start, start + length) in the
// positive direction
double arc_start(const GeodesicArc& a) {
  double s = a.positive ? a.from : a.to;
  s -= std::floor(s);
  return s;
}

}  // namespace

bool GeodesicArc::contains(const GeodesicArc& other) const {
  if (other.length == 0.0) return true;
  if (length == 0.0) return false;
  double rel = arc_start(other) - arc_start(*this);
  rel -= std::floor(rel);
  return rel + other.length <= length;
}

bool GeodesicArc::intersects(const GeodesicArc& other) const {
  if (length == 0.0 || other.length == 0.0) return false;
  double r12 = arc_start(other) - arc_start(*this);
  r12 -= std::floor(r12);
  double r21 = arc_start(*this) - arc_start(other);
  r21 -= std::floor(r21);
  return r12 < length || r21 < other.length;
}

std::optional<double> find_uncrossed_point(const std::vector<double>& xs,
                                           const std::vector<double>& ys,
                                           const std::vector<std::size_t>& sigma) {
  std::size_t p = xs.size();
  if (ys.size() != p || sigma.size() != p)
    throw std::invalid_argument("assignment size mismatch");

  std::vector<double> all;
  all.reserve(2 * p);
  all.insert(all.end(), xs.begin(), xs.end());
  all.insert(all.end(), ys.begin(), ys.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 1; i < all.size(); ++i)
    if (all[i] == all[i - 1]) throw std::invalid_argument("coincident points");

  std::vector<GeodesicArc> arcs;
  arcs.reserve(p);
  for (std::size_t l = 0; l < p; ++l) arcs.push_back(GeodesicArc::between(xs[l], ys[sigma[l]]));

  auto uncovered = [&](double c) {
    for (const auto& a : arcs)
      if (a.contains(c)) return false;
    return true;
  };

  // midpoints of gaps between consecutive endpoints first, then the
  // endpoints themselves (arcs are open, so an endpoint may be free even
  // when its neighborhood is covered)
  for (std::size_t i = 0; i < all.size(); ++i) {
    double next = i + 1 < all.size() ? all[i + 1] : all[0] + 1.0;
    double mid = 0.5 * (all[i] + next);
    mid -= std::floor(mid);
    if (uncovered(mid)) return mid;
  }
  for (double c : all)
    if (uncovered(c)) return c;
  return std::nullopt;
}

}  // namespace circlot
