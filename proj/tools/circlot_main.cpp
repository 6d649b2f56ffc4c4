#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <string>

#include "circlot/circle_ot.hpp"
#include "circlot/exact_oracle.hpp"
#include "circlot/hue_imaging.hpp"
#include "circlot/io.hpp"
#include "circlot/line_ot.hpp"
#include "circlot/retrieval_bench.hpp"

namespace {

using namespace circlot;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitComputation = 1;
constexpr int kExitUsage = 2;

Topology parse_topology(const std::string& name) {
  if (name == "circular") return Topology::Circular;
  if (name == "linear") return Topology::Linear;
  throw CLI::ValidationError("--topology", "expected 'circular' or 'linear'");
}

struct LoadedInput {
  bool is_histogram = true;
  Histogram histogram;
  PointMassDistribution points{{0.0}, {1.0}};
};

LoadedInput load_input(const std::string& path, const std::string& kind, Topology topology) {
  LoadedInput out;
  if (kind == "points") {
    out.is_histogram = false;
    out.points = read_point_masses(path);
  } else {
    out.histogram = read_histograms(path, topology).histograms.front();
  }
  return out;
}

void print_value(double v) { std::printf("%.12g\n", v); }

struct DistOptions {
  std::string file_f, file_g;
  std::string topology = "circular";
  std::string cost = "power:1";
  std::string units;  // empty = by input kind
  std::string input = "histogram";
  double epsilon = 1e-9;
  bool as_json = false;
  bool normalize_units = false;
  std::string emit_map;
};

int run_dist(const DistOptions& opt) {
  Topology topology = parse_topology(opt.topology);
  GroundCost cost = GroundCost::parse(opt.cost, topology);

  LoadedInput f, g;
  try {
    f = load_input(opt.file_f, opt.input, topology);
    g = load_input(opt.file_g, opt.input, topology);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::string units_name = opt.units;
  if (units_name.empty()) units_name = f.is_histogram ? "bins" : "perimeter";
  if (opt.normalize_units) units_name = "perimeter";
  if (units_name != "bins" && units_name != "perimeter")
    throw CLI::ValidationError("--units", "expected 'bins' or 'perimeter'");
  Units units = units_name == "bins" ? Units::Bins : Units::Perimeter;
  if (!f.is_histogram) units = Units::Perimeter;

  double distance = 0.0;
  json alpha_or_mu;  // stays null unless the circular convex path produced one
  if (cost.is_convex_increasing()) {
    if (topology == Topology::Circular) {
      CircleMkResult res = f.is_histogram
                               ? mk_circle_with_alpha(f.histogram, g.histogram, cost,
                                                      opt.epsilon, units)
                               : mk_circle_with_alpha(f.points, g.points, cost, opt.epsilon);
      double lambda = cost.power_exponent();
      distance = lambda == 1.0 ? res.cost : std::pow(res.cost, 1.0 / lambda);
      // the median mu for the linear cost, the optimal shift otherwise
      alpha_or_mu = lambda == 1.0 ? -res.alpha : res.alpha;
    } else {
      distance = f.is_histogram ? mk_line_distance(f.histogram, g.histogram, cost, units)
                                : mk_line_distance(f.points, g.points, cost);
    }
  } else {
    if (f.is_histogram) {
      distance = mk_concave(f.histogram, g.histogram, cost, units);
    } else {
      distance = solve_transport(f.points, g.points, cost).cost;
    }
  }

  if (!opt.emit_map.empty()) {
    if (!cost.is_convex_increasing()) {
      std::cerr << "error: --emit-map requires a convex cost\n";
      return kExitUsage;
    }
    if (!f.is_histogram) {
      std::cerr << "error: --emit-map requires histogram inputs\n";
      return kExitUsage;
    }
    TransferMap map = topology == Topology::Circular
                          ? circular_transfer_map(f.histogram, g.histogram, cost, opt.epsilon)
                          : monotone_transfer_map(f.histogram, g.histogram);
    write_transfer_map(map, opt.emit_map);
  }

  if (opt.as_json) {
    json out{{"distance", distance}, {"alpha_or_mu", alpha_or_mu}, {"units", units_name}};
    std::cout << out.dump() << "\n";
  } else {
    print_value(distance);
  }
  return kExitOk;
}

struct OracleOptions {
  std::string file_f, file_g;
  std::string topology = "circular";
  std::string cost = "power:1";
  std::string units;
  std::string input = "histogram";
  std::string emit_plan;
  bool as_json = false;
};

int run_oracle(const OracleOptions& opt) {
  Topology topology = parse_topology(opt.topology);
  GroundCost cost = GroundCost::parse(opt.cost, topology);

  LoadedInput f, g;
  try {
    f = load_input(opt.file_f, opt.input, topology);
    g = load_input(opt.file_g, opt.input, topology);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::string units_name = opt.units.empty() ? (f.is_histogram ? "bins" : "perimeter")
                                             : opt.units;
  if (units_name != "bins" && units_name != "perimeter")
    throw CLI::ValidationError("--units", "expected 'bins' or 'perimeter'");
  Units units = units_name == "bins" ? Units::Bins : Units::Perimeter;

  TransportSolution sol = f.is_histogram
                              ? solve_transport(f.histogram, g.histogram, cost, units)
                              : solve_transport(f.points, g.points, cost);

  if (!opt.emit_plan.empty()) {
    std::ofstream out(opt.emit_plan);
    if (!out) {
      std::cerr << "error: cannot open '" << opt.emit_plan << "' for writing\n";
      return kExitUsage;
    }
    out << "i,j,flow,cost_contrib\n";
    char buf[120];
    for (const auto& e : sol.plan.entries) {
      double unit_cost =
          f.is_histogram
              ? (units == Units::Bins
                     ? cost.bins(e.source, e.target, f.histogram.size())
                     : cost(static_cast<double>(e.source) / f.histogram.size(),
                            static_cast<double>(e.target) / g.histogram.size()))
              : cost(f.points.points[e.source], g.points.points[e.target]);
      std::snprintf(buf, sizeof(buf), "%zu,%zu,%.12g,%.12g", e.source, e.target, e.flow,
                    e.flow * unit_cost);
      out << buf << "\n";
    }
  }

  if (opt.as_json) {
    json out{{"cost", sol.cost}, {"plan_entries", sol.plan.entries.size()},
             {"units", units_name}};
    std::cout << out.dump() << "\n";
  } else {
    print_value(sol.cost);
  }
  return kExitOk;
}

struct TransferOptions {
  std::string source, target, output;
  std::size_t bins = 360;
};

int run_transfer_hue(const TransferOptions& opt) {
  RgbImage source, target;
  try {
    source = read_ppm(opt.source);
    target = read_ppm(opt.target);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  RgbImage out = transfer_hue(source, target, opt.bins);
  write_ppm(out, opt.output);
  return kExitOk;
}

struct BenchOptions {
  std::string experiment = "shift";
  std::size_t per_class = 100;
  std::size_t samples = 1000;
  std::size_t bins = 100;
  std::uint64_t seed = 42;
  std::string out_dir = "results";
  std::string distances;
};

int run_bench(const BenchOptions& opt) {
  BenchConfig config;
  if (opt.experiment == "shift") {
    config.experiment = PerturbationModel::Kind::Shift;
  } else if (opt.experiment == "weight") {
    config.experiment = PerturbationModel::Kind::Weight;
  } else {
    throw CLI::ValidationError("--experiment", "expected 'shift' or 'weight'");
  }
  config.per_class = opt.per_class;
  config.n_samples = opt.samples;
  config.n_bins = opt.bins;
  config.seed = opt.seed;
  if (!opt.distances.empty()) {
    std::size_t start = 0;
    while (start <= opt.distances.size()) {
      std::size_t comma = opt.distances.find(',', start);
      std::size_t end = comma == std::string::npos ? opt.distances.size() : comma;
      if (end > start) config.distances.push_back(opt.distances.substr(start, end - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }

  auto results = run_experiment(config);
  write_bench_results(results, opt.out_dir);
  std::printf("%-10s %8s %12s\n", "distance", "mAP", "wall_ms");
  for (const auto& res : results)
    std::printf("%-10s %8.4f %12.1f\n", res.distance_name.c_str(),
                res.mean_average_precision, res.wall_time_ms);
  return kExitOk;
}

struct SelftestOptions {
  int trials = 200;
  std::uint64_t seed = 7;
};

int run_selftest(const SelftestOptions& opt) {
  std::mt19937 rng(static_cast<std::uint32_t>(opt.seed));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto random_histogram = [&](std::size_t n) {
    std::vector<double> w(n);
    double total = 0.0;
    while (total == 0.0) {
      for (auto& v : w) v = unit(rng) < 0.3 ? 0.0 : unit(rng);
      total = std::accumulate(w.begin(), w.end(), 0.0);
    }
    return normalize(Histogram(std::move(w), Topology::Circular));
  };
  auto random_points = [&](std::size_t p) {
    std::vector<double> pts(p), ms(p, 1.0 / static_cast<double>(p));
    for (auto& v : pts) v = unit(rng);
    return PointMassDistribution(std::move(pts), std::move(ms));
  };

  double dev_cemd = 0.0, dev_circle = 0.0, dev_line = 0.0, dev_points = 0.0,
         dev_concave = 0.0;
  const GroundCost powers[] = {GroundCost::power(1.0, Topology::Circular),
                               GroundCost::power(2.0, Topology::Circular),
                               GroundCost::power(3.0, Topology::Circular)};
  for (int t = 0; t < opt.trials; ++t) {
    {
      std::size_t n = 2 + static_cast<std::size_t>(unit(rng) * 62);
      auto f = random_histogram(n), g = random_histogram(n);
      dev_cemd = std::max(dev_cemd, std::abs(cemd(f, g) - cemd_bruteforce(f, g)));
    }
    {
      std::size_t n = 2 + static_cast<std::size_t>(unit(rng) * 10);
      auto f = random_histogram(n), g = random_histogram(n);
      const GroundCost& c = powers[t % 3];
      double fast = mk_circle(f, g, c);
      double exact = solve_transport(f, g, c).cost;
      dev_circle = std::max(dev_circle, std::abs(fast - exact) / std::max(1.0, exact));
    }
    {
      std::size_t n = 2 + static_cast<std::size_t>(unit(rng) * 10);
      auto f = random_histogram(n), g = random_histogram(n);
      f.topology = g.topology = Topology::Linear;
      GroundCost c = GroundCost::power(1.0 + static_cast<double>(t % 3), Topology::Linear);
      double fast = mk_line(f, g, c);
      double exact = solve_transport(f, g, c, Units::Bins).cost;
      dev_line = std::max(dev_line, std::abs(fast - exact) / std::max(1.0, exact));
    }
    {
      std::size_t p = 2 + static_cast<std::size_t>(unit(rng) * 5);
      auto f = random_points(p), g = random_points(p);
      const GroundCost& c = powers[t % 3];
      double fast = mk_circle(f, g, c);
      double exact = solve_assignment_exhaustive(f.points, g.points, c).cost;
      dev_points = std::max(dev_points, std::abs(fast - exact) / std::max(1.0, exact));
    }
    {
      auto f = random_histogram(24), g = random_histogram(24);
      double half_l1 = 0.0;
      for (std::size_t i = 0; i < 24; ++i) half_l1 += std::abs(f.weights[i] - g.weights[i]);
      half_l1 *= 0.5;
      auto zeroone = GroundCost::zero_one(Topology::Circular);
      dev_concave = std::max(dev_concave, std::abs(mk_concave(f, g, zeroone) - half_l1));
      auto thresh = GroundCost::thresholded(2.0, Topology::Circular);
      dev_concave = std::max(dev_concave, std::abs(mk_concave(f, g, thresh) -
                                                   solve_transport(f, g, thresh).cost));
    }
  }

  bool ok = dev_cemd <= 1e-10 && dev_circle <= 1e-6 && dev_line <= 1e-9 &&
            dev_points <= 1e-6 && dev_concave <= 1e-9;
  std::printf("selftest trials=%d max_dev: cemd_vs_cuts=%.3g circle_vs_oracle=%.3g "
              "line_vs_oracle=%.3g points_vs_assignment=%.3g concave_identities=%.3g -> %s\n",
              opt.trials, dev_cemd, dev_circle, dev_line, dev_points, dev_concave,
              ok ? "PASS" : "FAIL");
  return ok ? kExitOk : kExitComputation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monge-Kantorovich distances for 1-D and circular histograms"};
  app.require_subcommand(1);

  DistOptions dist;
  auto* dist_cmd = app.add_subcommand("dist", "distance between two distributions");
  dist_cmd->add_option("f", dist.file_f, "first distribution file")->required();
  dist_cmd->add_option("g", dist.file_g, "second distribution file")->required();
  dist_cmd->add_option("--topology", dist.topology, "circular|linear");
  dist_cmd->add_option("--cost", dist.cost, "power:L | exp:TAU | thresh:T | zeroone");
  dist_cmd->add_option("--units", dist.units, "bins|perimeter");
  dist_cmd->add_option("--input", dist.input, "histogram|points");
  dist_cmd->add_option("--epsilon", dist.epsilon, "shift-search precision");
  dist_cmd->add_flag("--json", dist.as_json, "emit a JSON object");
  dist_cmd->add_flag("--normalize", dist.normalize_units,
                     "report perimeter units (divide bin units by N)");
  dist_cmd->add_option("--emit-map", dist.emit_map, "write the optimal transfer map CSV");

  OracleOptions oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "exact transportation solver");
  oracle_cmd->add_option("f", oracle.file_f, "first distribution file")->required();
  oracle_cmd->add_option("g", oracle.file_g, "second distribution file")->required();
  oracle_cmd->add_option("--topology", oracle.topology, "circular|linear");
  oracle_cmd->add_option("--cost", oracle.cost, "power:L | exp:TAU | thresh:T | zeroone");
  oracle_cmd->add_option("--units", oracle.units, "bins|perimeter");
  oracle_cmd->add_option("--input", oracle.input, "histogram|points");
  oracle_cmd->add_option("--emit-plan", oracle.emit_plan, "write the optimal plan CSV");
  oracle_cmd->add_flag("--json", oracle.as_json, "emit a JSON object");

  TransferOptions transfer;
  auto* transfer_cmd = app.add_subcommand("transfer-hue", "hue transfer between PPM images");
  transfer_cmd->add_option("source", transfer.source, "source image (PPM)")->required();
  transfer_cmd->add_option("target", transfer.target, "target image (PPM)")->required();
  transfer_cmd->add_option("output", transfer.output, "output image (PPM)")->required();
  transfer_cmd->add_option("--bins", transfer.bins, "hue histogram bins");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "synthetic two-class retrieval benchmark");
  bench_cmd->add_option("--experiment", bench.experiment, "shift|weight");
  bench_cmd->add_option("--per-class", bench.per_class, "histograms per class");
  bench_cmd->add_option("--samples", bench.samples, "samples per histogram");
  bench_cmd->add_option("--bins", bench.bins, "histogram bins");
  bench_cmd->add_option("--seed", bench.seed, "RNG seed");
  bench_cmd->add_option("--out", bench.out_dir, "output directory");
  bench_cmd->add_option("--distances", bench.distances, "comma-separated distance names");

  SelftestOptions selftest;
  auto* selftest_cmd = app.add_subcommand("selftest", "randomized oracle-equivalence checks");
  selftest_cmd->add_option("--trials", selftest.trials, "trials per check");
  selftest_cmd->add_option("--seed", selftest.seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (dist_cmd->parsed()) return run_dist(dist);
    if (oracle_cmd->parsed()) return run_oracle(oracle);
    if (transfer_cmd->parsed()) return run_transfer_hue(transfer);
    if (bench_cmd->parsed()) return run_bench(bench);
    if (selftest_cmd->parsed()) return run_selftest(selftest);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputation;
  }
  return kExitUsage;
}
