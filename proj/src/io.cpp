#include "circlot/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace circlot {

namespace {

double parse_double(std::string_view token, const char* what) {
  // trim surrounding spaces
  while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front())))
    token.remove_prefix(1);
  while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back())))
    token.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw std::runtime_error(std::string("malformed ") + what + " value '" +
                             std::string(token) + "'");
  return v;
}

std::vector<double> parse_csv_line(const std::string& line, const char* what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t comma = line.find(',', start);
    std::size_t end = comma == std::string::npos ? line.size() : comma;
    out.push_back(parse_double({line.data() + start, end - start}, what));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool blank(const std::string& line) {
  for (char c : line)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

HistogramFile read_histograms(std::istream& in, std::optional<Topology> topology_override) {
  HistogramFile out;
  Topology topology = Topology::Circular;
  std::optional<std::size_t> declared_bins;

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line)) continue;
    if (line[0] == '#') {
      std::istringstream header(line.substr(1));
      std::string token;
      while (header >> token) {
        if (token.rfind("topology=", 0) == 0) {
          auto value = token.substr(9);
          if (value == "circular")
            topology = Topology::Circular;
          else if (value == "linear")
            topology = Topology::Linear;
          else
            throw std::runtime_error("unknown topology '" + value + "'");
          out.had_header = true;
        } else if (token.rfind("bins=", 0) == 0) {
          declared_bins = static_cast<std::size_t>(parse_double(token.substr(5), "bins"));
          out.had_header = true;
        }
      }
      continue;
    }
    auto weights = parse_csv_line(line, "histogram");
    if (declared_bins && weights.size() != *declared_bins)
      throw std::runtime_error("histogram line does not match declared bin count");
    out.histograms.emplace_back(std::move(weights),
                                topology_override.value_or(topology));
  }
  if (out.histograms.empty()) throw std::runtime_error("no histograms in input");
  return out;
}

HistogramFile read_histograms(const std::string& path,
                              std::optional<Topology> topology_override) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_histograms(in, topology_override);
}

void write_histograms(const std::vector<Histogram>& histograms, std::ostream& out,
                      bool header) {
  if (histograms.empty()) throw std::invalid_argument("nothing to write");
  char buf[40];
  if (header) {
    out << "# topology="
        << (histograms.front().topology == Topology::Circular ? "circular" : "linear")
        << " bins=" << histograms.front().size() << "\n";
  }
  for (const auto& h : histograms) {
    for (std::size_t i = 0; i < h.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", h.weights[i]);
      out << (i ? "," : "") << buf;
    }
    out << "\n";
  }
}

void write_histograms(const std::vector<Histogram>& histograms, const std::string& path,
                      bool header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_histograms(histograms, out, header);
}

PointMassDistribution read_point_masses(std::istream& in) {
  std::vector<double> points, masses;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line) || line[0] == '#') continue;
    auto values = parse_csv_line(line, "point-mass");
    if (values.size() != 2)
      throw std::runtime_error("point-mass lines must be 'position,mass'");
    points.push_back(values[0]);
    masses.push_back(values[1]);
  }
  return PointMassDistribution(std::move(points), std::move(masses));
}

PointMassDistribution read_point_masses(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_point_masses(in);
}

void write_point_masses(const PointMassDistribution& d, std::ostream& out) {
  char buf[80];
  for (std::size_t i = 0; i < d.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g", d.points[i], d.masses[i]);
    out << buf << "\n";
  }
}

void write_point_masses(const PointMassDistribution& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_point_masses(d, out);
}

void write_transfer_map(const TransferMap& map, std::ostream& out) {
  out << "source_quantile,source_pos,target_pos\n";
  char buf[120];
  for (const auto& s : map.segments()) {
    double target = s.dst_atom - std::floor(s.dst_atom);
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g", s.q0, s.src_atom, target);
    out << buf << "\n";
  }
}

void write_transfer_map(const TransferMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_transfer_map(map, out);
}

}  // namespace circlot
