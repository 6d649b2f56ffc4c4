#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "circlot/retrieval_bench.hpp"

using namespace circlot;

TEST_CASE("sample_histogram") {
  SUBCASE("degenerate sigma concentrates in one bin") {
    MixtureParams params{1.0 - 1e-12, 0.55, 0.9, 1e-6, 1e-6};
    auto h = sample_histogram(params, 500, 10, 1);
    CHECK(h.weights[5] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("deterministic per seed") {
    MixtureParams params{0.6, 0.2, 0.7, 0.05, 0.05};
    auto a = sample_histogram(params, 1000, 100, 42);
    auto b = sample_histogram(params, 1000, 100, 42);
    CHECK(a.weights == b.weights);
    auto c = sample_histogram(params, 1000, 100, 43);
    CHECK(a.weights != c.weights);
  }
  SUBCASE("empirical mixture weight concentrates around p") {
    MixtureParams params{0.6, 0.2, 0.7, 0.05, 0.05};
    std::size_t n = 1000;
    auto h = sample_histogram(params, n, 100, 7);
    double left = 0.0;
    for (std::size_t i = 0; i < 45; ++i) left += h.weights[i];
    CHECK(std::abs(left - params.p) <= 3.0 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("perturbation models") {
  MixtureParams base{0.6, 0.2, 0.7, 0.05, 0.05};
  PerturbationModel shift{PerturbationModel::Kind::Shift, 0.1};
  PerturbationModel weight{PerturbationModel::Kind::Weight, 0.1};
  auto s = shift.apply(base, 0.08);
  CHECK(s.mu1 == doctest::Approx(0.28));
  CHECK(s.p == base.p);
  auto w = weight.apply(base, -0.05);
  CHECK(w.p == doctest::Approx(0.55));
  CHECK(w.mu1 == base.mu1);
  // clamping keeps parameters legal
  CHECK(weight.apply(base, 0.9).p < 1.0);
  CHECK(shift.apply(base, 0.9).mu1 < 1.0);
}

TEST_CASE("generate_database") {
  MixtureParams a{0.6, 0.2, 0.7, 0.05, 0.05}, b{0.8, 0.2, 0.7, 0.05, 0.05};
  PerturbationModel shift{PerturbationModel::Kind::Shift, 0.1};
  auto db = generate_database(a, b, shift, 1, 100, 20, 3);
  CHECK(db.histograms.size() == 2);
  CHECK(db.labels == std::vector<int>{0, 1});

  auto db2 = generate_database(a, b, shift, 5, 100, 20, 3);
  auto db3 = generate_database(a, b, shift, 5, 100, 20, 3);
  for (std::size_t i = 0; i < db2.histograms.size(); ++i)
    CHECK(db2.histograms[i].weights == db3.histograms[i].weights);
}

TEST_CASE("precision_recall") {
  SUBCASE("hand-built ranking, two relevant at ranks 1 and 3") {
    // query 0 has label 1; ranked items alternate labels 1,0,1,0
    std::vector<int> labels{1, 1, 0, 1, 0};
    std::vector<std::size_t> ranked{1, 2, 3, 4};
    auto pr = precision_recall(0, ranked, labels);
    CHECK(pr.precision[1] == doctest::Approx(0.5));
    CHECK(pr.recall[1] == doctest::Approx(0.5));
    CHECK(pr.recall.back() == doctest::Approx(1.0));
    CHECK(pr.average_precision == doctest::Approx((1.0 + 2.0 / 3.0) / 2.0).epsilon(1e-12));
  }
  SUBCASE("perfect ranking") {
    std::vector<int> labels{0, 0, 0, 1, 1, 1, 1};
    std::vector<std::size_t> ranked{1, 2, 3, 4, 5, 6};
    auto pr = precision_recall(0, ranked, labels);
    CHECK(pr.recall[1] == doctest::Approx(1.0));  // r = class size - 1
    CHECK(pr.precision[0] == doctest::Approx(1.0));
    CHECK(pr.precision[1] == doctest::Approx(1.0));
    CHECK(pr.average_precision == doctest::Approx(1.0));
    for (std::size_t r = 1; r < pr.recall.size(); ++r)
      CHECK(pr.recall[r] >= pr.recall[r - 1]);
  }
  SUBCASE("random rankings of balanced classes hover near one half precision") {
    std::mt19937 rng(211);
    std::size_t count = 40;
    std::vector<int> labels(count);
    for (std::size_t i = 0; i < count; ++i) labels[i] = i % 2;
    double sum_p_at_10 = 0.0;
    int reps = 400;
    for (int rep = 0; rep < reps; ++rep) {
      std::vector<std::size_t> ranked;
      for (std::size_t i = 1; i < count; ++i) ranked.push_back(i);
      std::shuffle(ranked.begin(), ranked.end(), rng);
      sum_p_at_10 += precision_recall(0, ranked, labels).precision[9];
    }
    CHECK(std::abs(sum_p_at_10 / reps - 0.487) <= 0.05);  // 19/39 relevant others
  }
  SUBCASE("ranking containing the query is rejected") {
    std::vector<int> labels{0, 0, 1};
    std::vector<std::size_t> ranked{0, 1};
    CHECK_THROWS_AS(precision_recall(0, ranked, labels), std::invalid_argument);
  }
}

TEST_CASE("bench distances are symmetric with zero diagonal") {
  MixtureParams a{0.6, 0.2, 0.7, 0.05, 0.05}, b{0.8, 0.2, 0.7, 0.05, 0.05};
  auto f = sample_histogram(a, 300, 50, 5);
  auto g = sample_histogram(b, 300, 50, 6);
  for (const auto& name : default_bench_distances()) {
    CHECK(bench_distance(name, f, f) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(bench_distance(name, f, g) ==
          doctest::Approx(bench_distance(name, g, f)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(bench_distance("nope", f, g), std::invalid_argument);
}

TEST_CASE("disjoint classes are perfectly separable by every distance") {
  BenchConfig config;
  config.per_class = 6;
  config.n_samples = 300;
  config.n_bins = 40;
  config.seed = 9;
  config.perturbation_half_width = 0.0;
  config.class_a = {0.999999, 0.2, 0.2, 0.01, 0.01};
  config.class_b = {0.999999, 0.7, 0.7, 0.01, 0.01};
  for (auto res : run_experiment(config)) {
    CHECK(res.mean_average_precision == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t r = 0; r + 1 < config.per_class; ++r)
      CHECK(res.precision[r] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t r = 1; r < res.recall.size(); ++r)
      CHECK(res.recall[r] >= res.recall[r - 1]);
    CHECK(res.recall.back() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("experiment output is reproducible") {
  BenchConfig config;
  config.per_class = 5;
  config.n_samples = 200;
  config.n_bins = 30;
  config.seed = 21;
  config.distances = {"L1", "MK_1", "MK_exp2"};

  auto r1 = run_experiment(config);
  auto r2 = run_experiment(config);
  REQUIRE(r1.size() == r2.size());
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].mean_average_precision == r2[i].mean_average_precision);
    CHECK(r1[i].recall == r2[i].recall);
    CHECK(r1[i].precision == r2[i].precision);
  }

  auto dir1 = std::filesystem::temp_directory_path() / "circlot_bench_a";
  auto dir2 = std::filesystem::temp_directory_path() / "circlot_bench_b";
  write_bench_results(r1, dir1.string());
  write_bench_results(r2, dir2.string());
  for (const auto& name : config.distances) {
    std::ifstream a(dir1 / ("pr_" + name + ".csv")), b(dir2 / ("pr_" + name + ".csv"));
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(!sa.str().empty());
  }
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
}
