#include "circlot/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "circlot/warnings.hpp"

namespace circlot {

namespace {

void check_weights(const std::vector<double>& weights) {
  if (weights.empty()) throw std::invalid_argument("empty distribution");
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("histogram weights must be nonnegative");
  }
}

}  // namespace

Histogram::Histogram(std::vector<double> w, Topology t) : weights(std::move(w)), topology(t) {
  check_weights(weights);
}

double Histogram::total() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

bool Histogram::is_normalized(double tol) const {
  return std::abs(total() - 1.0) <= tol;
}

PointMassDistribution::PointMassDistribution(std::vector<double> pts, std::vector<double> ms)
    : points(std::move(pts)), masses(std::move(ms)) {
  if (points.empty()) throw std::invalid_argument("empty distribution");
  if (points.size() != masses.size())
    throw std::invalid_argument("positions and masses must have equal length");
  for (double p : points) {
    if (!(p >= 0.0 && p < 1.0))
      throw std::invalid_argument("point positions must lie in [0,1)");
  }
  for (double m : masses) {
    if (!(m > 0.0)) throw std::invalid_argument("point masses must be positive");
  }
}

double PointMassDistribution::total() const {
  return std::accumulate(masses.begin(), masses.end(), 0.0);
}

bool PointMassDistribution::is_normalized(double tol) const {
  return std::abs(total() - 1.0) <= tol;
}

CumulativeFunction::CumulativeFunction(std::vector<double> positions,
                                       std::vector<double> masses) {
  if (positions.empty()) throw std::invalid_argument("empty distribution");
  if (positions.size() != masses.size())
    throw std::invalid_argument("positions and masses must have equal length");

  std::vector<std::size_t> order(positions.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return positions[a] < positions[b]; });

  double running = 0.0;
  for (std::size_t idx : order) {
    double p = positions[idx];
    double m = masses[idx];
    if (m == 0.0) continue;
    running += m;
    if (!breakpoints_.empty() && breakpoints_.back() == p) {
      values_.back() = running;
    } else {
      breakpoints_.push_back(p);
      values_.push_back(running);
    }
  }
  total_ = running;
  if (breakpoints_.empty()) throw std::invalid_argument("empty distribution");
}

double CumulativeFunction::operator()(double y) const {
  double shift = std::floor(y);
  double y0 = y - shift;
  // First breakpoint >= y0; atoms strictly left of y0 are counted.
  auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), y0);
  double base = (it == breakpoints_.begin()) ? 0.0 : values_[(it - breakpoints_.begin()) - 1];
  return base + shift * total_;
}

double CumulativeFunction::value_after(double y) const {
  double shift = std::floor(y);
  double y0 = y - shift;
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), y0);
  double base = (it == breakpoints_.begin()) ? 0.0 : values_[(it - breakpoints_.begin()) - 1];
  return base + shift * total_;
}

double CumulativeFunction::pseudo_inverse(double y) const {
  double shift = std::floor(y / total_);
  double y0 = y - shift * total_;
  if (y0 >= total_) {  // guard against round-off at the period boundary
    y0 -= total_;
    shift += 1.0;
  }
  // First atom whose cumulative value exceeds y0.
  auto it = std::upper_bound(values_.begin(), values_.end(), y0);
  if (it == values_.end()) it = values_.end() - 1;
  return breakpoints_[it - values_.begin()] + shift;
}

double CumulativeFunction::mass_at(std::size_t j) const {
  return j == 0 ? values_[0] : values_[j] - values_[j - 1];
}

CumulativeFunction cumulative(const Histogram& f) {
  check_weights(f.weights);
  std::size_t n = f.size();
  std::vector<double> positions(n);
  for (std::size_t i = 0; i < n; ++i) positions[i] = static_cast<double>(i) / n;
  return CumulativeFunction(std::move(positions), f.weights);
}

CumulativeFunction cumulative(const PointMassDistribution& f) {
  return CumulativeFunction(f.points, f.masses);
}

std::vector<double> prefix_sums(const Histogram& f) {
  std::vector<double> out(f.size());
  double running = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    running += f.weights[i];
    out[i] = running;
  }
  return out;
}

std::vector<double> shifted_cumulative_values(const Histogram& f, std::size_t k) {
  std::size_t n = f.size();
  if (k >= n) throw std::out_of_range("cut bin out of range");
  std::vector<double> out(n);
  double running = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    running += f.weights[(k + r) % n];
    out[r] = running;
  }
  return out;
}

CumulativeFunction shifted_cumulative(const Histogram& f, std::size_t k) {
  std::size_t n = f.size();
  if (k >= n) throw std::out_of_range("cut bin out of range");
  std::vector<double> positions(n), masses(n);
  for (std::size_t r = 0; r < n; ++r) {
    positions[r] = static_cast<double>(r) / n;
    masses[r] = f.weights[(k + r) % n];
  }
  return CumulativeFunction(std::move(positions), std::move(masses));
}

CumulativeFunction x_cumulative(const CumulativeFunction& f, double x) {
  if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("reference point must lie in [0,1)");
  auto bps = f.breakpoints();
  std::vector<double> positions(bps.size()), masses(bps.size());
  for (std::size_t j = 0; j < bps.size(); ++j) {
    double p = bps[j] - x;
    if (p < 0.0) p += 1.0;
    positions[j] = p;
    masses[j] = f.mass_at(j);
  }
  return CumulativeFunction(std::move(positions), std::move(masses));
}

Histogram normalize(const Histogram& f) {
  check_weights(f.weights);
  double t = f.total();
  if (t <= 0.0) throw std::invalid_argument("cannot normalize zero total mass");
  Histogram out = f;
  for (double& w : out.weights) w /= t;
  // kill residual round-off so the sum is exactly 1
  double t2 = out.total();
  if (t2 != 1.0 && t2 > 0.0) {
    for (double& w : out.weights) w /= t2;
  }
  return out;
}

PointMassDistribution normalize(const PointMassDistribution& f) {
  double t = f.total();
  if (t <= 0.0) throw std::invalid_argument("cannot normalize zero total mass");
  PointMassDistribution out = f;
  for (double& m : out.masses) m /= t;
  double t2 = out.total();
  if (t2 != 1.0 && t2 > 0.0) {
    for (double& m : out.masses) m /= t2;
  }
  return out;
}

Histogram rotate(const Histogram& f, std::size_t k) {
  if (f.topology != Topology::Circular)
    throw std::invalid_argument("rotate requires circular topology");
  std::size_t n = f.size();
  Histogram out = f;
  for (std::size_t i = 0; i < n; ++i) out.weights[(i + k) % n] = f.weights[i];
  return out;
}

Histogram ensure_normalized(const Histogram& f) {
  check_weights(f.weights);
  double t = f.total();
  if (t <= 0.0) throw std::invalid_argument("cannot normalize zero total mass");
  if (std::abs(t - 1.0) <= 1e-9) return f;
  emit_warning("histogram mass " + std::to_string(t) + " deviates from 1; renormalizing");
  return normalize(f);
}

PointMassDistribution ensure_normalized(const PointMassDistribution& f) {
  double t = f.total();
  if (t <= 0.0) throw std::invalid_argument("cannot normalize zero total mass");
  if (std::abs(t - 1.0) <= 1e-9) return f;
  emit_warning("point-mass total " + std::to_string(t) + " deviates from 1; renormalizing");
  return normalize(f);
}

}  // namespace circlot
