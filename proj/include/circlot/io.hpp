#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "circlot/histogram.hpp"
#include "circlot/transfer_map.hpp"

namespace circlot {

/// Histogram files hold one histogram per line of comma-separated
/// nonnegative decimals, with an optional header line
/// `# topology=circular bins=N`.
struct HistogramFile {
  std::vector<Histogram> histograms;
  bool had_header = false;
};

HistogramFile read_histograms(std::istream& in,
                              std::optional<Topology> topology_override = {});
HistogramFile read_histograms(const std::string& path,
                              std::optional<Topology> topology_override = {});
void write_histograms(const std::vector<Histogram>& histograms, std::ostream& out,
                      bool header = true);
void write_histograms(const std::vector<Histogram>& histograms, const std::string& path,
                      bool header = true);

/// Point-mass files: one `position,mass` pair per line, one distribution
/// per file.
PointMassDistribution read_point_masses(std::istream& in);
PointMassDistribution read_point_masses(const std::string& path);
void write_point_masses(const PointMassDistribution& d, std::ostream& out);
void write_point_masses(const PointMassDistribution& d, const std::string& path);

/// Transfer map rows: source_quantile,source_pos,target_pos.
void write_transfer_map(const TransferMap& map, std::ostream& out);
void write_transfer_map(const TransferMap& map, const std::string& path);

}  // namespace circlot
