#include "circlot/circle_ot.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "ot_detail.hpp"

namespace circlot {

namespace {

void require_convex(const GroundCost& cost) {
  if (!cost.is_convex_increasing())
    throw std::invalid_argument("use exact_oracle for concave costs");
}

void require_circular(const Histogram& f, const char* what) {
  if (f.topology != Topology::Circular)
    throw std::invalid_argument(std::string(what) + " requires circular topology");
  if (f.size() < 2)
    throw std::invalid_argument(std::string(what) + " requires at least 2 bins");
}

double root_of(double raw, const GroundCost& cost) {
  double lambda = cost.power_exponent();
  return lambda == 1.0 ? raw : std::pow(raw, 1.0 / lambda);
}

// Canonical argument order for the symmetric distances: floating-point
// tie-breaks would otherwise let d(f,g) and d(g,f) differ in the last ulp.
bool canonical_swap(const Histogram& f, const Histogram& g) {
  return std::lexicographical_compare(g.weights.begin(), g.weights.end(),
                                      f.weights.begin(), f.weights.end());
}

bool canonical_swap(const PointMassDistribution& f, const PointMassDistribution& g) {
  if (g.points != f.points)
    return std::lexicographical_compare(g.points.begin(), g.points.end(), f.points.begin(),
                                        f.points.end());
  return std::lexicographical_compare(g.masses.begin(), g.masses.end(), f.masses.begin(),
                                      f.masses.end());
}

struct Prepared {
  CumulativeFunction f, g;
  double gap_scale;
};

Prepared prepare(const Histogram& f, const Histogram& g, Units units, const char* what) {
  require_circular(f, what);
  require_circular(g, what);
  double gap_scale = 1.0;
  if (units == Units::Bins) {
    if (f.size() != g.size())
      throw std::invalid_argument("bin units require equal bin counts");
    gap_scale = static_cast<double>(f.size());
  }
  return {cumulative(ensure_normalized(f)), cumulative(ensure_normalized(g)), gap_scale};
}

Prepared prepare(const PointMassDistribution& f, const PointMassDistribution& g) {
  return {cumulative(ensure_normalized(f)), cumulative(ensure_normalized(g)), 1.0};
}

// Exact lambda=1 minimizer: mu is the weighted median of the values of
// F - G, weighted by the lengths of the intervals they live on.
CircleMkResult mk1_exact(const Prepared& p) {
  auto diff = detail::cumulative_difference_steps(p.f, p.g);
  double mu = weighted_median(diff.values, diff.lengths);
  // F - G stays within one unit of mass, so the minimizer stays inside
  // the [-1,1] search bracket used for general convex costs
  assert(std::abs(mu) <= 1.0 + 1e-12);
  double cost = 0.0;
  for (std::size_t i = 0; i < diff.values.size(); ++i)
    cost += diff.lengths[i] * std::abs(diff.values[i] - mu);
  return {cost * p.gap_scale, -mu};
}

constexpr double kGoldenRatio = 1.6180339887498949;

CircleMkResult minimize_phi(const Prepared& p, const GroundCost& cost, double epsilon) {
  auto eval = [&](double alpha) {
    return detail::sweep_cost(p.f, p.g, cost, alpha, p.gap_scale, true);
  };

  // Any optimal shift lies in [-1,1]: F - G ranges over [-1,1] for unit
  // masses, and shifting G by a full mass unit or more only lengthens
  // every quantile gap.
  double a = -1.0, b = 1.0;
  double c = b - (b - a) / kGoldenRatio;
  double d = a + (b - a) / kGoldenRatio;
  double fc = eval(c), fd = eval(d);
  while (b - a > epsilon) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) / kGoldenRatio;
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) / kGoldenRatio;
      fd = eval(d);
    }
  }

  // phi is piecewise affine: its slope changes exactly where a shifted
  // cumulative level of g collides with a level of f, i.e. at
  // alpha = B_j - A_i + k. Sweeping every such kink left inside the
  // bracket (plus the bracket ends) yields the exact minimum.
  double best_alpha = 0.5 * (a + b);
  double best = eval(best_alpha);
  auto consider = [&](double alpha) {
    if (alpha < a || alpha > b) return;
    double v = eval(alpha);
    if (v < best) {
      best = v;
      best_alpha = alpha;
    }
  };
  consider(a);
  consider(b);
  auto f_levels = p.f.values();
  auto g_levels = p.g.values();
  for (double ai : f_levels) {
    for (double k : {-1.0, 0.0, 1.0}) {
      // B_j in [a + A_i - k, b + A_i - k]
      auto lo = std::lower_bound(g_levels.begin(), g_levels.end(), a + ai - k);
      auto hi = std::upper_bound(g_levels.begin(), g_levels.end(), b + ai - k);
      for (auto it = lo; it != hi; ++it) consider(*it - ai + k);
    }
  }
  return {best, best_alpha};
}

}  // namespace

double weighted_median(std::span<const double> values, std::span<const double> weights) {
  if (values.empty()) throw std::invalid_argument("weighted median of empty input");
  if (values.size() != weights.size())
    throw std::invalid_argument("values and weights must have equal length");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("weights must be nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("weights must not all vanish");

  // Quickselect for the smallest value v with weight{<= v} >= total/2.
  std::vector<std::pair<double, double>> items(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) items[i] = {values[i], weights[i]};

  double target = total / 2.0;
  double below = 0.0;  // weight strictly left of the active range
  std::size_t lo = 0, hi = items.size();
  while (hi - lo > 32) {
    double p0 = items[lo].first;
    double p1 = items[lo + (hi - lo) / 2].first;
    double p2 = items[hi - 1].first;
    double pivot = std::max(std::min(p0, p1), std::min(std::max(p0, p1), p2));

    auto mid_it = std::partition(items.begin() + lo, items.begin() + hi,
                                 [&](const auto& it) { return it.first < pivot; });
    auto hi_it = std::partition(mid_it, items.begin() + hi,
                                [&](const auto& it) { return it.first == pivot; });
    double w_less = 0.0, w_equal = 0.0;
    for (auto it = items.begin() + lo; it != mid_it; ++it) w_less += it->second;
    for (auto it = mid_it; it != hi_it; ++it) w_equal += it->second;

    if (below + w_less >= target) {
      hi = static_cast<std::size_t>(mid_it - items.begin());
    } else if (below + w_less + w_equal >= target) {
      return pivot;
    } else {
      below += w_less + w_equal;
      lo = static_cast<std::size_t>(hi_it - items.begin());
    }
  }
  std::sort(items.begin() + lo, items.begin() + hi);
  double acc = below;
  for (std::size_t i = lo; i < hi; ++i) {
    acc += items[i].second;
    if (acc >= target) return items[i].first;
  }
  return items[hi - 1].first;
}

namespace {

// Booth's least-rotation algorithm; exact comparisons on the doubled
// sequence, O(n).
std::size_t least_rotation(const std::vector<double>& s) {
  const std::size_t n = s.size();
  auto at = [&](std::size_t idx) { return s[idx % n]; };
  std::vector<std::ptrdiff_t> fail(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    double sj = at(j);
    std::ptrdiff_t i = fail[j - k - 1];
    while (i != -1 && sj != at(k + static_cast<std::size_t>(i) + 1)) {
      if (sj < at(k + static_cast<std::size_t>(i) + 1))
        k = j - static_cast<std::size_t>(i) - 1;
      i = fail[static_cast<std::size_t>(i)];
    }
    if (i == -1 && sj != at(k)) {
      if (sj < at(k)) k = j;
      fail[j - k] = -1;
    } else if (i == -1) {
      fail[j - k] = 0;
    } else {
      fail[j - k] = i + 1;
    }
  }
  return k % n;
}

double lower_median(std::vector<double> values) {
  std::size_t idx = (values.size() + 1) / 2 - 1;
  std::nth_element(values.begin(), values.begin() + idx, values.end());
  return values[idx];
}

}  // namespace

CemdResult cemd_with_mu(const Histogram& f, const Histogram& g) {
  require_circular(f, "cemd");
  require_circular(g, "cemd");
  if (f.size() != g.size()) throw std::invalid_argument("mismatched bin counts");
  auto fn = ensure_normalized(f);
  auto gn = ensure_normalized(g);

  // The distance is evaluated on a canonical representative of the
  // difference vector, chosen among all rotations of d and -d. Rotating
  // both inputs or swapping them then reproduces the exact same float
  // arithmetic, so rotation invariance and symmetry hold bitwise.
  std::size_t n = fn.size();
  std::vector<double> d(n), nd(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = fn.weights[i] - gn.weights[i];
    nd[i] = -d[i];
  }
  std::size_t kd = least_rotation(d);
  std::size_t knd = least_rotation(nd);
  const std::vector<double>* pick = &d;
  std::size_t anchor = kd;
  for (std::size_t r = 0; r < n; ++r) {
    double a = d[(kd + r) % n], b = nd[(knd + r) % n];
    if (a < b) break;
    if (b < a) {
      pick = &nd;
      anchor = knd;
      break;
    }
  }

  std::vector<double> cum(n);
  double running = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    running += (*pick)[(anchor + r) % n];
    cum[r] = running;
  }
  double mu_canonical = lower_median(cum);
  double distance = 0.0;
  for (double v : cum) distance += std::abs(v - mu_canonical);

  // mu reported as a median of the cumulative differences in the
  // original bin-0 frame
  std::vector<double> diff(n);
  double rf = 0.0, rg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rf += fn.weights[i];
    rg += gn.weights[i];
    diff[i] = rf - rg;
  }
  return {distance, lower_median(std::move(diff))};
}

double cemd(const Histogram& f, const Histogram& g) { return cemd_with_mu(f, g).distance; }

double cemd_bruteforce(const Histogram& f, const Histogram& g) {
  require_circular(f, "cemd_bruteforce");
  require_circular(g, "cemd_bruteforce");
  if (f.size() != g.size()) throw std::invalid_argument("mismatched bin counts");
  auto fn = ensure_normalized(f);
  auto gn = ensure_normalized(g);

  std::size_t n = fn.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    auto fk = shifted_cumulative_values(fn, k);
    auto gk = shifted_cumulative_values(gn, k);
    double cut = 0.0;
    for (std::size_t i = 0; i < n; ++i) cut += std::abs(fk[i] - gk[i]);
    best = std::min(best, cut);
  }
  return best;
}

double phi(const Histogram& f, const Histogram& g, const GroundCost& cost, double alpha,
           Units units) {
  require_convex(cost);
  auto p = prepare(f, g, units, "phi");
  return detail::sweep_cost(p.f, p.g, cost, alpha, p.gap_scale, true);
}

double phi(const PointMassDistribution& f, const PointMassDistribution& g,
           const GroundCost& cost, double alpha) {
  require_convex(cost);
  auto p = prepare(f, g);
  return detail::sweep_cost(p.f, p.g, cost, alpha, p.gap_scale, true);
}

CircleMkResult mk_circle_with_alpha(const Histogram& f, const Histogram& g,
                                    const GroundCost& cost, double epsilon, Units units) {
  require_convex(cost);
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (canonical_swap(f, g)) {
    auto res = mk_circle_with_alpha(g, f, cost, epsilon, units);
    return {res.cost, -res.alpha};
  }
  auto p = prepare(f, g, units, "mk_circle");
  if (cost.power_exponent() == 1.0) return mk1_exact(p);
  return minimize_phi(p, cost, epsilon);
}

CircleMkResult mk_circle_with_alpha(const PointMassDistribution& f,
                                    const PointMassDistribution& g, const GroundCost& cost,
                                    double epsilon) {
  require_convex(cost);
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (canonical_swap(f, g)) {
    auto res = mk_circle_with_alpha(g, f, cost, epsilon);
    return {res.cost, -res.alpha};
  }
  auto p = prepare(f, g);
  if (cost.power_exponent() == 1.0) return mk1_exact(p);
  return minimize_phi(p, cost, epsilon);
}

double mk_circle(const Histogram& f, const Histogram& g, const GroundCost& cost,
                 double epsilon, Units units) {
  return mk_circle_with_alpha(f, g, cost, epsilon, units).cost;
}

double mk_circle(const PointMassDistribution& f, const PointMassDistribution& g,
                 const GroundCost& cost, double epsilon) {
  return mk_circle_with_alpha(f, g, cost, epsilon).cost;
}

double mk_circle_distance(const Histogram& f, const Histogram& g, const GroundCost& cost,
                          double epsilon, Units units) {
  return root_of(mk_circle(f, g, cost, epsilon, units), cost);
}

double mk_circle_distance(const PointMassDistribution& f, const PointMassDistribution& g,
                          const GroundCost& cost, double epsilon) {
  return root_of(mk_circle(f, g, cost, epsilon), cost);
}

TransferMap circular_transfer_map(const Histogram& f_source, const Histogram& f_target) {
  require_circular(f_source, "circular_transfer_map");
  require_circular(f_target, "circular_transfer_map");
  auto u = ensure_normalized(f_source);
  auto t = ensure_normalized(f_target);
  auto cu = cumulative(u);
  auto ct = cumulative(t);

  auto diff = detail::cumulative_difference_steps(cu, ct);
  double mu = weighted_median(diff.values, diff.lengths);
  return detail::build_transfer_map(cu, 1.0 / static_cast<double>(u.size()), ct,
                                    1.0 / static_cast<double>(t.size()), -mu, mu,
                                    Topology::Circular, true);
}

TransferMap circular_transfer_map(const Histogram& f_source, const Histogram& f_target,
                                  const GroundCost& cost, double epsilon) {
  if (cost.power_exponent() == 1.0) return circular_transfer_map(f_source, f_target);
  auto res = mk_circle_with_alpha(f_source, f_target, cost, epsilon);
  auto u = ensure_normalized(f_source);
  auto t = ensure_normalized(f_target);
  return detail::build_transfer_map(cumulative(u), 1.0 / static_cast<double>(u.size()),
                                    cumulative(t), 1.0 / static_cast<double>(t.size()),
                                    res.alpha, -res.alpha, Topology::Circular, true);
}

}  // namespace circlot
