#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "circlot/exact_oracle.hpp"
#include "circlot/line_ot.hpp"
#include "test_util.hpp"

using namespace circlot;

namespace {

const GroundCost kCirc1 = GroundCost::power(1.0, Topology::Circular);
const GroundCost kCirc2 = GroundCost::power(2.0, Topology::Circular);
const GroundCost kCirc3 = GroundCost::power(3.0, Topology::Circular);

Histogram delta_bin(std::size_t i, std::size_t n) {
  std::vector<double> w(n, 0.0);
  w[i] = 1.0;
  return Histogram(std::move(w), Topology::Circular);
}

void check_plan_invariants(const TransportSolution& sol, const GroundCost& cost,
                           std::size_t n_bins) {
  auto rows = sol.plan.row_sums();
  auto cols = sol.plan.column_sums();
  for (std::size_t i = 0; i < rows.size(); ++i)
    CHECK(rows[i] == doctest::Approx(sol.plan.source_marginals[i]).epsilon(1e-9));
  for (std::size_t j = 0; j < cols.size(); ++j)
    CHECK(cols[j] == doctest::Approx(sol.plan.target_marginals[j]).epsilon(1e-9));
  double recomputed = 0.0;
  for (const auto& e : sol.plan.entries) {
    CHECK(e.flow >= 0.0);
    recomputed += e.flow * cost.bins(e.source, e.target, n_bins);
  }
  CHECK(recomputed == doctest::Approx(sol.cost).epsilon(1e-9));
  // optimality certificate
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      CHECK(cost.bins(i, j, n_bins) - sol.source_potentials[i] + sol.target_potentials[j] >=
            -1e-9);
}

}  // namespace

TEST_CASE("solve_transport basics") {
  SUBCASE("identical distributions stay in place") {
    std::mt19937 rng(127);
    auto f = testing::random_histogram(rng, 8);
    auto sol = solve_transport(f, f, kCirc1);
    CHECK(sol.cost == doctest::Approx(0.0).epsilon(1e-12));
    for (const auto& e : sol.plan.entries) CHECK(e.source == e.target);
  }
  SUBCASE("single atom across the circle") {
    auto sol = solve_transport(delta_bin(0, 4), delta_bin(3, 4), kCirc1);
    CHECK(sol.cost == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("size cap") {
    TransportOptions options;
    options.max_entries = 4;
    std::mt19937 rng(131);
    auto f = testing::random_histogram(rng, 8);
    CHECK_THROWS_AS(solve_transport(f, f, kCirc1, Units::Bins, options),
                    std::invalid_argument);
  }
  SUBCASE("infeasible totals") {
    CHECK_THROWS_AS(
        solve_transport_arrays({0.5, 0.5}, {0.3, 0.3}, {{0.0, 1.0}, {1.0, 0.0}}),
        std::invalid_argument);
  }
}

TEST_CASE("solver output satisfies the plan invariants and duality") {
  std::mt19937 rng(137);
  const GroundCost costs[] = {kCirc1, kCirc2, kCirc3,
                              GroundCost::exponential(1.0, Topology::Circular),
                              GroundCost::thresholded(2.0, Topology::Circular),
                              GroundCost::zero_one(Topology::Circular)};
  for (int t = 0; t < 60; ++t) {
    auto f = testing::random_histogram(rng, 10);
    auto g = testing::random_histogram(rng, 10);
    const GroundCost& c = costs[t % 6];
    auto sol = solve_transport(f, g, c);
    check_plan_invariants(sol, c, 10);
  }
}

TEST_CASE("solver equals the exhaustive refinement oracle on 6x6 instances") {
  std::mt19937 rng(139);
  const GroundCost costs[] = {kCirc1, kCirc2, kCirc3,
                              GroundCost::exponential(2.0, Topology::Circular),
                              GroundCost::thresholded(2.0, Topology::Circular),
                              GroundCost::zero_one(Topology::Circular)};
  for (int t = 0; t < 60; ++t) {
    auto f = testing::random_rational_histogram(rng, 6, 7);
    auto g = testing::random_rational_histogram(rng, 6, 7);
    const GroundCost& c = costs[t % 6];
    double oracle = testing::exhaustive_transport_cost_bins(f, g, c, 7);
    double solver = solve_transport(f, g, c).cost;
    CHECK(solver == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("assignment solvers") {
  SUBCASE("single pair") {
    auto res = solve_assignment({0.1}, {0.4}, kCirc2);
    CHECK(res.cost == doctest::Approx(0.09).epsilon(1e-12));
    CHECK(res.permutation == std::vector<std::size_t>{0});
  }
  SUBCASE("identical point sets have a zero-cost matching") {
    std::mt19937 rng(149);
    auto pts = testing::random_unit_masses(rng, 6).points;
    CHECK(solve_assignment(pts, pts, kCirc1).cost == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("hungarian equals the exhaustive scan") {
    std::mt19937 rng(151);
    for (int t = 0; t < 100; ++t) {
      auto xs = testing::random_unit_masses(rng, 6).points;
      auto ys = testing::random_unit_masses(rng, 6).points;
      double a = solve_assignment_exhaustive(xs, ys, kCirc2).cost;
      double b = solve_assignment_hungarian(xs, ys, kCirc2).cost;
      CHECK(std::abs(a - b) <= 1e-12);
    }
  }
  SUBCASE("assignment equals transport on unit masses") {
    std::mt19937 rng(157);
    for (int t = 0; t < 30; ++t) {
      auto f = testing::random_unit_masses(rng, 6);
      auto g = testing::random_unit_masses(rng, 6);
      double a = solve_assignment(f.points, g.points, kCirc2).cost;
      double b = solve_transport(f, g, kCirc2).cost;
      CHECK(a == doctest::Approx(b).epsilon(1e-9));
    }
  }
  SUBCASE("unequal counts are rejected") {
    CHECK_THROWS_AS(solve_assignment({0.1, 0.2}, {0.3}, kCirc1), std::invalid_argument);
  }
}

TEST_CASE("mk_concave") {
  const GroundCost exp1 = GroundCost::exponential(1.0, Topology::Circular);
  const GroundCost thresh2 = GroundCost::thresholded(2.0, Topology::Circular);
  const GroundCost zeroone = GroundCost::zero_one(Topology::Circular);

  SUBCASE("identical distributions") {
    std::mt19937 rng(163);
    auto f = testing::random_histogram(rng, 12);
    for (const auto* c : {&exp1, &thresh2, &zeroone})
      CHECK(mk_concave(f, f, *c) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("zero-one example") {
    Histogram f({1.0, 0.0}, Topology::Circular), g({0.0, 1.0}, Topology::Circular);
    CHECK(mk_concave(f, g, zeroone) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("convex cost is rejected") {
    Histogram f({0.5, 0.5}, Topology::Circular);
    CHECK_THROWS_AS(mk_concave(f, f, kCirc1), std::invalid_argument);
  }
  SUBCASE("zero-one closed form equals the solver") {
    std::mt19937 rng(167);
    for (int t = 0; t < 50; ++t) {
      auto f = testing::random_histogram(rng, 16);
      auto g = testing::random_histogram(rng, 16);
      double closed = mk_concave(f, g, zeroone);
      double half_l1 = 0.0;
      for (std::size_t i = 0; i < 16; ++i)
        half_l1 += std::abs(f.weights[i] - g.weights[i]);
      half_l1 *= 0.5;
      CHECK(closed == doctest::Approx(half_l1).epsilon(1e-12));
      CHECK(solve_transport(f, g, zeroone).cost == doctest::Approx(closed).epsilon(1e-9));
    }
  }
  SUBCASE("shared-mass reduction is cost-neutral") {
    std::mt19937 rng(173);
    for (int t = 0; t < 40; ++t) {
      auto f = testing::random_histogram(rng, 32);
      auto g = testing::random_histogram(rng, 32);
      const GroundCost& c = t % 2 ? thresh2 : exp1;
      double reduced = mk_concave(f, g, c);
      double full = solve_transport(f, g, c).cost;
      CHECK(reduced == doctest::Approx(full).epsilon(1e-9));
    }
  }
  SUBCASE("reassembled plan keeps shared mass and reproduces the marginals") {
    std::mt19937 rng(179);
    for (int t = 0; t < 20; ++t) {
      auto f = testing::random_histogram(rng, 16);
      auto g = testing::random_histogram(rng, 16);
      auto sol = mk_concave_with_plan(f, g, thresh2);
      auto rows = sol.plan.row_sums();
      auto cols = sol.plan.column_sums();
      for (std::size_t i = 0; i < 16; ++i) {
        CHECK(rows[i] == doctest::Approx(sol.plan.source_marginals[i]).epsilon(1e-9));
        CHECK(cols[i] == doctest::Approx(sol.plan.target_marginals[i]).epsilon(1e-9));
        CHECK(sol.plan.flow_at(i, i) >=
              std::min(sol.plan.source_marginals[i], sol.plan.target_marginals[i]) - 1e-9);
      }
    }
  }
}

TEST_CASE("thresholded T=2 plan structure on the full solver") {
  std::mt19937 rng(181);
  const GroundCost thresh2 = GroundCost::thresholded(2.0, Topology::Circular);
  for (int t = 0; t < 30; ++t) {
    auto f = testing::random_histogram(rng, 32);
    auto g = testing::random_histogram(rng, 32);
    auto sol = solve_transport(f, g, thresh2);

    double positive_part = 0.0;
    for (std::size_t i = 0; i < 32; ++i)
      positive_part += std::max(f.weights[i] - g.weights[i], 0.0);
    double neighbor_flow = 0.0;
    for (const auto& e : sol.plan.entries) {
      if (e.source == e.target) continue;
      if (bin_distance(e.source, e.target, 32, Topology::Circular) == 1.0)
        neighbor_flow += e.flow;
    }
    CHECK(sol.cost == doctest::Approx(2.0 * positive_part - neighbor_flow).epsilon(1e-9));
    for (std::size_t i = 0; i < 32; ++i)
      CHECK(sol.plan.flow_at(i, i) >= std::min(f.weights[i], g.weights[i]) - 1e-9);
  }
}

TEST_CASE("geodesic arcs") {
  auto arc = GeodesicArc::between(0.1, 0.3);
  CHECK(arc.positive);
  CHECK(arc.length == doctest::Approx(0.2));
  CHECK(arc.contains(0.2));
  CHECK_FALSE(arc.contains(0.1));  // open at the endpoints
  CHECK_FALSE(arc.contains(0.3));
  CHECK_FALSE(arc.contains(0.5));

  auto wrap = GeodesicArc::between(0.9, 0.1);
  CHECK(wrap.positive);
  CHECK(wrap.contains(0.95));
  CHECK(wrap.contains(0.05));
  CHECK_FALSE(wrap.contains(0.5));

  auto negative = GeodesicArc::between(0.3, 0.1);
  CHECK_FALSE(negative.positive);
  CHECK(negative.contains(0.2));

  auto antipodal = GeodesicArc::between(0.2, 0.7);
  CHECK(antipodal.positive);  // ties go to the trigonometric direction

  CHECK(GeodesicArc::between(0.1, 0.4).contains(GeodesicArc::between(0.2, 0.3)));
  CHECK_FALSE(GeodesicArc::between(0.2, 0.3).contains(GeodesicArc::between(0.1, 0.4)));
  CHECK(GeodesicArc::between(0.1, 0.3).intersects(GeodesicArc::between(0.2, 0.4)));
  CHECK_FALSE(GeodesicArc::between(0.1, 0.2).intersects(GeodesicArc::between(0.3, 0.4)));
}

TEST_CASE("find_uncrossed_point") {
  SUBCASE("single short arc") {
    auto cut = find_uncrossed_point({0.1}, {0.2}, {0});
    REQUIRE(cut.has_value());
    CHECK_FALSE(GeodesicArc::between(0.1, 0.2).contains(*cut));
  }
  SUBCASE("two crossing pairs still leave a gap") {
    std::vector<double> xs{0.0, 0.5}, ys{0.25, 0.75};
    for (auto sigma : {std::vector<std::size_t>{0, 1}, std::vector<std::size_t>{1, 0}}) {
      auto cut = find_uncrossed_point(xs, ys, sigma);
      REQUIRE(cut.has_value());
      for (std::size_t l = 0; l < xs.size(); ++l)
        CHECK_FALSE(GeodesicArc::between(xs[l], ys[sigma[l]]).contains(*cut));
    }
  }
  SUBCASE("coincident points are rejected") {
    CHECK_THROWS_AS(find_uncrossed_point({0.1, 0.1}, {0.2, 0.3}, {0, 1}),
                    std::invalid_argument);
  }
}

TEST_CASE("every optimal assignment admits a cut for strictly convex costs") {
  std::mt19937 rng(191);
  std::uniform_int_distribution<std::size_t> size(2, 7);
  for (int t = 0; t < 60; ++t) {
    std::size_t p = size(rng);
    auto xs = testing::random_unit_masses(rng, p).points;
    auto ys = testing::random_unit_masses(rng, p).points;
    const GroundCost& c = t % 2 ? kCirc2 : kCirc3;
    for (const auto& sigma : enumerate_optimal_assignments(xs, ys, c)) {
      auto cut = find_uncrossed_point(xs, ys, sigma);
      CHECK(cut.has_value());
    }
  }
}

TEST_CASE("at least one optimal assignment admits a cut at lambda 1") {
  std::mt19937 rng(193);
  std::uniform_int_distribution<std::size_t> size(2, 7);
  for (int t = 0; t < 60; ++t) {
    std::size_t p = size(rng);
    auto xs = testing::random_unit_masses(rng, p).points;
    auto ys = testing::random_unit_masses(rng, p).points;
    bool found = false;
    for (const auto& sigma : enumerate_optimal_assignments(xs, ys, kCirc1)) {
      if (find_uncrossed_point(xs, ys, sigma).has_value()) {
        found = true;
        break;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("optimal arcs for strictly convex costs do not nest and align directions") {
  std::mt19937 rng(197);
  std::uniform_int_distribution<std::size_t> size(2, 7);
  for (int t = 0; t < 60; ++t) {
    std::size_t p = size(rng);
    auto xs = testing::random_unit_masses(rng, p).points;
    auto ys = testing::random_unit_masses(rng, p).points;
    const GroundCost& c = t % 2 ? kCirc2 : kCirc3;
    for (const auto& sigma : enumerate_optimal_assignments(xs, ys, c)) {
      std::vector<GeodesicArc> arcs;
      for (std::size_t l = 0; l < p; ++l)
        arcs.push_back(GeodesicArc::between(xs[l], ys[sigma[l]]));
      for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = 0; b < p; ++b) {
          if (a == b) continue;
          CHECK_FALSE(arcs[a].contains(arcs[b]));
          if (arcs[a].intersects(arcs[b])) CHECK(arcs[a].positive == arcs[b].positive);
        }
      }
    }
  }
}
