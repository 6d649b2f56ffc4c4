#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "circlot/ground_cost.hpp"

using namespace circlot;

TEST_CASE("geodesic distance") {
  CHECK(geodesic_distance(0.2, 0.2) == 0.0);
  CHECK(geodesic_distance(0.0, 0.5) == 0.5);
  CHECK(geodesic_distance(0.1, 0.9) == doctest::Approx(0.2).epsilon(1e-12));

  std::mt19937 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 10000; ++t) {
    double x = unit(rng), y = unit(rng), z = unit(rng);
    CHECK(geodesic_distance(x, y) <= 0.5);
    CHECK(geodesic_distance(x, y) == geodesic_distance(y, x));
    CHECK(geodesic_distance(x, z) <=
          geodesic_distance(x, y) + geodesic_distance(y, z) + 1e-12);
  }
}

TEST_CASE("evaluate") {
  CHECK(GroundCost::power(2.0, Topology::Circular)(0.0, 0.5) == doctest::Approx(0.25));
  CHECK(GroundCost::exponential(1.0, Topology::Circular)(0.0, 0.5) ==
        doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-12));
  CHECK(GroundCost::thresholded(2.0, Topology::Circular).bins(0, 5, 12) == 2.0);
  CHECK(GroundCost::zero_one(Topology::Circular)(0.3, 0.3) == 0.0);
  CHECK(GroundCost::zero_one(Topology::Circular)(0.3, 0.4) == 1.0);
  CHECK(GroundCost::power(1.0, Topology::Linear)(0.1, 0.9) == doctest::Approx(0.8));
}

TEST_CASE("convexity dispatch") {
  CHECK(GroundCost::power(1.0, Topology::Circular).is_convex_increasing());
  CHECK(GroundCost::power(3.0, Topology::Circular).is_convex_increasing());
  CHECK_FALSE(GroundCost::exponential(2.0, Topology::Circular).is_convex_increasing());
  CHECK_FALSE(GroundCost::thresholded(2.0, Topology::Circular).is_convex_increasing());
  CHECK_FALSE(GroundCost::zero_one(Topology::Circular).is_convex_increasing());
}

TEST_CASE("concave variants are metrics on the circle") {
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const GroundCost costs[] = {GroundCost::exponential(1.0, Topology::Circular),
                              GroundCost::thresholded(0.2, Topology::Circular),
                              GroundCost::zero_one(Topology::Circular)};
  for (const auto& c : costs) {
    for (int t = 0; t < 10000; ++t) {
      double x = unit(rng), y = unit(rng), z = unit(rng);
      CHECK(c(x, x) == 0.0);
      CHECK(c(x, y) == c(y, x));
      CHECK(c(x, z) <= c(x, y) + c(y, z) + 1e-12);
    }
  }
}

TEST_CASE("power:1 equals the geodesic distance") {
  auto c = GroundCost::power(1.0, Topology::Circular);
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    double x = unit(rng), y = unit(rng);
    CHECK(c(x, y) == geodesic_distance(x, y));
  }
}

TEST_CASE("parse") {
  CHECK(GroundCost::parse("power:2", Topology::Circular).name() ==
        GroundCost::power(2.0, Topology::Circular).name());
  CHECK(GroundCost::parse("exp:1.5", Topology::Linear).name() ==
        GroundCost::exponential(1.5, Topology::Linear).name());
  CHECK(GroundCost::parse("thresh:2", Topology::Circular).name() ==
        GroundCost::thresholded(2.0, Topology::Circular).name());
  CHECK(GroundCost::parse("zeroone", Topology::Circular).name() == "zeroone");
  CHECK_THROWS_AS(GroundCost::parse("power", Topology::Circular), std::invalid_argument);
  CHECK_THROWS_AS(GroundCost::parse("l2:1", Topology::Circular), std::invalid_argument);
  CHECK_THROWS_AS(GroundCost::parse("power:abc", Topology::Circular), std::invalid_argument);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(GroundCost::power(0.5, Topology::Circular), std::invalid_argument);
  CHECK_THROWS_AS(GroundCost::exponential(0.0, Topology::Circular), std::invalid_argument);
  CHECK_THROWS_AS(GroundCost::thresholded(-1.0, Topology::Circular), std::invalid_argument);
}
