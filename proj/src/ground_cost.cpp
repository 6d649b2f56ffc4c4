#include "circlot/ground_cost.hpp"

#include <cmath>
#include <charconv>
#include <stdexcept>

namespace circlot {

double geodesic_distance(double x, double y) {
  double d = std::abs(x - y);
  return std::min(d, 1.0 - d);
}

double bin_distance(std::size_t i, std::size_t j, std::size_t n_bins, Topology topology) {
  double d = i > j ? static_cast<double>(i - j) : static_cast<double>(j - i);
  if (topology == Topology::Circular) d = std::min(d, static_cast<double>(n_bins) - d);
  return d;
}

GroundCost::GroundCost(Variant v, Topology topology) : variant_(v), topology_(topology) {
  if (const auto* p = std::get_if<ConvexPower>(&variant_)) {
    if (!(p->lambda >= 1.0))
      throw std::invalid_argument("power cost requires lambda >= 1");
  } else if (const auto* e = std::get_if<Exponential>(&variant_)) {
    if (!(e->tau > 0.0)) throw std::invalid_argument("exponential cost requires tau > 0");
  } else if (const auto* t = std::get_if<Thresholded>(&variant_)) {
    if (!(t->threshold >= 0.0))
      throw std::invalid_argument("thresholded cost requires a nonnegative threshold");
  }
}

GroundCost GroundCost::power(double lambda, Topology topology) {
  return GroundCost(ConvexPower{lambda}, topology);
}
GroundCost GroundCost::exponential(double tau, Topology topology) {
  return GroundCost(Exponential{tau}, topology);
}
GroundCost GroundCost::thresholded(double threshold, Topology topology) {
  return GroundCost(Thresholded{threshold}, topology);
}
GroundCost GroundCost::zero_one(Topology topology) {
  return GroundCost(ZeroOne{}, topology);
}

GroundCost GroundCost::parse(std::string_view text, Topology topology) {
  auto parse_param = [](std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw std::invalid_argument("bad cost parameter");
    return v;
  };
  if (text == "zeroone") return zero_one(topology);
  auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    auto kind = text.substr(0, colon);
    auto param = text.substr(colon + 1);
    if (kind == "power") return power(parse_param(param), topology);
    if (kind == "exp") return exponential(parse_param(param), topology);
    if (kind == "thresh") return thresholded(parse_param(param), topology);
  }
  throw std::invalid_argument(
      "unknown cost '" + std::string(text) + "' (expected power:L, exp:TAU, thresh:T or zeroone)");
}

double GroundCost::apply(double distance) const {
  struct Visitor {
    double d;
    double operator()(const ConvexPower& p) const {
      if (p.lambda == 1.0) return d;
      if (p.lambda == 2.0) return d * d;
      if (p.lambda == 3.0) return d * d * d;
      return std::pow(d, p.lambda);
    }
    double operator()(const Exponential& e) const { return 1.0 - std::exp(-d / e.tau); }
    double operator()(const Thresholded& t) const { return std::min(d, t.threshold); }
    double operator()(const ZeroOne&) const { return d != 0.0 ? 1.0 : 0.0; }
  };
  return std::visit(Visitor{distance}, variant_);
}

double GroundCost::operator()(double x, double y) const {
  double d = topology_ == Topology::Circular ? geodesic_distance(x, y) : std::abs(x - y);
  return apply(d);
}

double GroundCost::bins(std::size_t i, std::size_t j, std::size_t n_bins) const {
  return apply(bin_distance(i, j, n_bins, topology_));
}

bool GroundCost::is_convex_increasing() const {
  return std::holds_alternative<ConvexPower>(variant_);
}

double GroundCost::power_exponent() const {
  if (const auto* p = std::get_if<ConvexPower>(&variant_)) return p->lambda;
  return 1.0;
}

std::string GroundCost::name() const {
  struct Visitor {
    std::string operator()(const ConvexPower& p) const {
      return "power:" + std::to_string(p.lambda);
    }
    std::string operator()(const Exponential& e) const {
      return "exp:" + std::to_string(e.tau);
    }
    std::string operator()(const Thresholded& t) const {
      return "thresh:" + std::to_string(t.threshold);
    }
    std::string operator()(const ZeroOne&) const { return "zeroone"; }
  };
  return std::visit(Visitor{}, variant_);
}

}  // namespace circlot
