#include "circlot/transfer_map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ot_detail.hpp"

namespace circlot {

TransferMap::TransferMap(std::vector<Segment> segments, double alpha, Topology topology)
    : segments_(std::move(segments)), alpha_(alpha), topology_(topology) {
  if (segments_.empty()) throw std::invalid_argument("transfer map has no segments");
}

const TransferMap::Segment& TransferMap::segment_at_quantile(double q) const {
  // first segment whose quantile range ends strictly after q
  auto it = std::upper_bound(segments_.begin(), segments_.end(), q,
                             [](double value, const Segment& s) { return value < s.q1; });
  if (it == segments_.end()) it = segments_.end() - 1;
  return *it;
}

double TransferMap::apply(double x) const {
  // The whole atom containing x goes where its lowest quantile goes:
  // this is H_t^{-1}(H_u(x)) with H_u read left-continuously at atoms.
  auto hit = segments_.end();
  for (auto it = segments_.begin(); it != segments_.end(); ++it) {
    bool inside = (it->sx0 == it->sx1) ? x == it->sx0 : (x >= it->sx0 && x < it->sx1);
    if (inside) {
      hit = it;
      break;
    }
  }
  const Segment* chosen;
  if (hit != segments_.end()) {
    double atom = hit->src_atom;
    while (hit != segments_.begin() && (hit - 1)->src_atom == atom) --hit;
    chosen = &*hit;
  } else {
    // x carries no mass: map through the cumulative mass strictly left of x
    double q = 0.0;
    for (const auto& s : segments_)
      if (s.sx1 <= x) q = s.q1;
    chosen = &segment_at_quantile(q);
  }
  double out = chosen->dst_atom;
  if (topology_ == Topology::Circular) out -= std::floor(out);
  return out;
}

double TransferMap::apply_interpolated(double x) const {
  // last segment starting at or before x
  auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                             [](double value, const Segment& s) { return value < s.sx0; });
  if (it != segments_.begin()) --it;
  const Segment& s = *it;
  double width = s.sx1 - s.sx0;
  if (width <= 0.0 || x < s.sx0 || x >= s.sx1) return apply(x);
  double frac = (x - s.sx0) / width;
  double out = s.dx0 + frac * (s.dx1 - s.dx0);
  if (topology_ == Topology::Circular) out -= std::floor(out);
  return out;
}

double TransferMap::transport_cost(const GroundCost& cost, Units units,
                                   std::size_t n_bins) const {
  double scale = units == Units::Bins ? static_cast<double>(n_bins) : 1.0;
  double total = 0.0;
  for (const auto& s : segments_) {
    double displacement = std::abs(s.dst_atom - s.src_atom);
    total += (s.q1 - s.q0) * cost.apply(scale * displacement);
  }
  return total;
}

std::vector<double> TransferMap::pushforward(std::size_t n_bins) const {
  std::vector<double> out(n_bins, 0.0);
  for (const auto& s : segments_) {
    double pos = s.dst_atom - std::floor(s.dst_atom);
    auto bin = static_cast<std::size_t>(std::lround(pos * static_cast<double>(n_bins))) % n_bins;
    out[bin] += s.q1 - s.q0;
  }
  return out;
}

namespace detail {

TransferMap build_transfer_map(const CumulativeFunction& u, double u_bin_width,
                               const CumulativeFunction& t, double t_bin_width,
                               double alpha_phi, double report_alpha, Topology topology,
                               bool periodic_target) {
  auto up = u.breakpoints();
  auto uc = u.values();
  auto tp = t.breakpoints();
  auto tc = t.values();

  std::vector<TransferMap::Segment> segments;
  sweep_pairing(u, t, alpha_phi, periodic_target,
                [&](double q0, double q1, std::size_t i, std::size_t j, double k) {
                  TransferMap::Segment s;
                  s.q0 = q0;
                  s.q1 = q1;
                  s.src_atom = up[i];
                  s.dst_atom = tp[j] + k;

                  double u_lo = i == 0 ? 0.0 : uc[i - 1];
                  double u_mass = uc[i] - u_lo;
                  if (u_mass > 0.0 && u_bin_width > 0.0) {
                    double f0 = std::clamp((q0 - u_lo) / u_mass, 0.0, 1.0);
                    double f1 = std::clamp((q1 - u_lo) / u_mass, 0.0, 1.0);
                    s.sx0 = up[i] + f0 * u_bin_width;
                    s.sx1 = up[i] + f1 * u_bin_width;
                  } else {
                    s.sx0 = s.sx1 = up[i];
                  }

                  double t_lo = (j == 0 ? 0.0 : tc[j - 1]) + k;
                  double t_mass = tc[j] - (j == 0 ? 0.0 : tc[j - 1]);
                  if (t_mass > 0.0 && t_bin_width > 0.0) {
                    double f0 = std::clamp((q0 + alpha_phi - t_lo) / t_mass, 0.0, 1.0);
                    double f1 = std::clamp((q1 + alpha_phi - t_lo) / t_mass, 0.0, 1.0);
                    s.dx0 = s.dst_atom + f0 * t_bin_width;
                    s.dx1 = s.dst_atom + f1 * t_bin_width;
                  } else {
                    s.dx0 = s.dx1 = s.dst_atom;
                  }
                  segments.push_back(s);
                });
  return TransferMap(std::move(segments), report_alpha, topology);
}

}  // namespace detail

}  // namespace circlot
