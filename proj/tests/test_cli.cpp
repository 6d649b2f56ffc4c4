#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "circlot/hue_imaging.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(CIRCLOT_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult res;
  char buf[512];
  while (std::fgets(buf, sizeof(buf), pipe)) res.output += buf;
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "circlot_cli_tests") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    auto p = path / name;
    std::ofstream out(p);
    out << content;
    return p.string();
  }
};

}  // namespace

TEST_CASE("dist subcommand") {
  TempDir tmp;
  auto delta0 = tmp.file("delta0.csv", "1,0,0,0,0,0,0,0\n");
  auto delta3 = tmp.file("delta3.csv", "0,0,0,1,0,0,0,0\n");

  SUBCASE("zero self distance") {
    auto res = run("dist --topology circular --cost power:1 " + delta0 + " " + delta0);
    CHECK(res.exit_code == 0);
    CHECK(res.output == "0\n");
  }
  SUBCASE("circular single-atom distance in bin units") {
    auto res = run("dist --topology circular --cost power:1 " + delta0 + " " + delta3);
    CHECK(res.exit_code == 0);
    CHECK(res.output == "3\n");
  }
  SUBCASE("json output has the stable fields") {
    auto res = run("dist --topology circular --cost power:2 --json " + delta0 + " " + delta3);
    CHECK(res.exit_code == 0);
    auto obj = nlohmann::json::parse(res.output);
    CHECK(obj.contains("distance"));
    CHECK(obj.contains("alpha_or_mu"));
    CHECK(obj["units"] == "bins");
    CHECK(obj["distance"].get<double>() == doctest::Approx(3.0).epsilon(1e-9));
  }
  SUBCASE("perimeter units") {
    auto res = run("dist --cost power:1 --units perimeter " + delta0 + " " + delta3);
    CHECK(res.output == "0.375\n");
  }
  SUBCASE("concave cost routes through the exact solver") {
    auto res = run("dist --cost thresh:2 " + delta0 + " " + delta3);
    CHECK(res.exit_code == 0);
    CHECK(res.output == "2\n");
  }
  SUBCASE("point-mass input") {
    auto pa = tmp.file("pa.csv", "0.1,1\n");
    auto pb = tmp.file("pb.csv", "0.9,1\n");
    auto res = run("dist --input points --cost power:1 " + pa + " " + pb);
    CHECK(res.exit_code == 0);
    CHECK(res.output == "0.2\n");
  }
  SUBCASE("emit-map writes the coupling") {
    auto map_path = (tmp.path / "map.csv").string();
    auto res = run("dist --cost power:1 --emit-map " + map_path + " " + delta0 + " " + delta3);
    CHECK(res.exit_code == 0);
    std::ifstream in(map_path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "source_quantile,source_pos,target_pos");
  }
  SUBCASE("missing file is a usage error") {
    auto res = run("dist " + tmp.file("ok.csv", "1,0\n") + " /nonexistent.csv");
    CHECK(res.exit_code == 2);
  }
  SUBCASE("malformed histogram is a usage error") {
    auto bad = tmp.file("bad.csv", "1,oops\n");
    auto res = run("dist " + bad + " " + bad);
    CHECK(res.exit_code == 2);
  }
}

TEST_CASE("oracle subcommand") {
  TempDir tmp;
  auto f = tmp.file("f.csv", "0.5,0.5,0,0\n");
  auto g = tmp.file("g.csv", "0,0,0.5,0.5\n");
  auto plan_path = (tmp.path / "plan.csv").string();
  auto res = run("oracle --cost exp:2 --emit-plan " + plan_path + " " + f + " " + g);
  CHECK(res.exit_code == 0);
  std::ifstream in(plan_path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "i,j,flow,cost_contrib");
  int rows = 0;
  double total_flow = 0.0;
  std::string row;
  while (std::getline(in, row)) {
    if (row.empty()) continue;
    ++rows;
    std::size_t last = row.rfind(',');
    std::size_t second_last = row.rfind(',', last - 1);
    total_flow += std::stod(row.substr(second_last + 1, last - second_last - 1));
  }
  CHECK(rows >= 2);
  CHECK(total_flow == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("transfer-hue subcommand") {
  TempDir tmp;
  circlot::RgbImage img;
  img.width = 8;
  img.height = 8;
  img.pixels.assign(8 * 8 * 3, 0);
  for (std::size_t p = 0; p < 64; ++p) img.pixels[3 * p] = 255;  // red
  circlot::RgbImage cyan = img;
  for (std::size_t p = 0; p < 64; ++p) {
    cyan.pixels[3 * p] = 0;
    cyan.pixels[3 * p + 1] = 255;
    cyan.pixels[3 * p + 2] = 255;
  }
  auto src = (tmp.path / "src.ppm").string();
  auto tgt = (tmp.path / "tgt.ppm").string();
  auto out = (tmp.path / "out.ppm").string();
  circlot::write_ppm(img, src);
  circlot::write_ppm(cyan, tgt);

  auto res = run("transfer-hue " + src + " " + tgt + " " + out + " --bins 36");
  CHECK(res.exit_code == 0);
  auto result = circlot::read_ppm(out);
  auto hsv = circlot::rgb_to_hsv(result.pixels[0], result.pixels[1], result.pixels[2]);
  CHECK(hsv.hue == doctest::Approx(180.0).epsilon(1e-9));

  auto bad = tmp.file("bad.ppm", "not a ppm");
  CHECK(run("transfer-hue " + bad + " " + tgt + " " + out).exit_code == 2);
}

TEST_CASE("bench subcommand writes csv outputs") {
  TempDir tmp;
  auto out_dir = (tmp.path / "results").string();
  auto res = run("bench --experiment shift --per-class 3 --samples 100 --bins 20 --seed 5 "
                 "--out " + out_dir + " --distances L1,MK_1");
  CHECK(res.exit_code == 0);
  CHECK(fs::exists(fs::path(out_dir) / "pr_L1.csv"));
  CHECK(fs::exists(fs::path(out_dir) / "pr_MK_1.csv"));
  CHECK(fs::exists(fs::path(out_dir) / "summary.csv"));

  auto out_dir2 = (tmp.path / "results2").string();
  run("bench --experiment shift --per-class 3 --samples 100 --bins 20 --seed 5 --out " +
      out_dir2 + " --distances L1,MK_1");
  for (const char* name : {"pr_L1.csv", "pr_MK_1.csv"}) {
    std::ifstream a(fs::path(out_dir) / name), b(fs::path(out_dir2) / name);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
  }
}

TEST_CASE("selftest subcommand") {
  auto res = run("selftest --trials 30 --seed 11");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("PASS") != std::string::npos);
  CHECK(res.output.find("max_dev") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run("frobnicate").exit_code == 2);
  CHECK(run("dist").exit_code == 2);
  TempDir tmp;
  auto f = tmp.file("f.csv", "1,0\n");
  CHECK(run("dist --cost l7:1 " + f + " " + f).exit_code == 2);
  CHECK(run("dist --topology moebius " + f + " " + f).exit_code == 2);
}
