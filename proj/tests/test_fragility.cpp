#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "doctest.h"
#include "ris/errors.hpp"
#include "ris/fragility.hpp"
#include "ris/oracle.hpp"
#include "ris/problem.hpp"

using namespace ris;
namespace fs = std::filesystem;

namespace {

const SurfaceGrid& linear_grid() {
  static const SurfaceGrid grid = [] {
    SurfaceConfig c;
    c.samples_per_level = 300;
    return is_one(make_linear_problem(3.0, 2), SurfaceAxes::uniform(2.0, 3, 4.0, 4), c, RandomStream(21));
  }();
  return grid;
}

fs::path temp(const std::string& name) { return fs::temp_directory_path() / ("ris_fragility_" + name); }

std::size_t index_of(const std::vector<double>& axis, double v) {
  for (std::size_t k = 0; k < axis.size(); ++k)
    if (std::fabs(axis[k] - v) <= 1e-12 * std::max(1.0, std::fabs(v))) return k;
  return axis.size();
}

}  // namespace

TEST_CASE("dense surface keeps the coarse nodes and is monotone") {
  const auto& g = linear_grid();
  const IntensityMapping map{0.05, 3.0, 0.0};
  const auto s = assemble_surface(g, map, 30, 20);
  CHECK(s.pga.size() == 30);
  CHECK(s.threshold.size() == 20);
  CHECK(s.provenance == "is1-reweighting");
  CHECK(s.metadata.calls == g.calls);
  for (std::size_t i = 0; i < g.axes.rows(); ++i)
    for (std::size_t j = 0; j < g.axes.columns(); ++j) {
      const auto t = index_of(s.threshold, 3.0 - g.axes.epsilon[i]);
      const auto a = index_of(s.pga, 0.05 * g.axes.xi[j]);
      REQUIRE(t < s.threshold.size());
      REQUIRE(a < s.pga.size());
      CHECK(s.at(t, a) == g.at(i, j));
    }
  for (std::size_t t = 0; t < s.threshold.size(); ++t)
    for (std::size_t a = 0; a < s.pga.size(); ++a) {
      const double v = s.at(t, a);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      if (a > 0) CHECK(v >= s.at(t, a - 1));
      if (t > 0) CHECK(v <= s.at(t - 1, a));
    }
}

TEST_CASE("dense resolution equal to the coarse grid is the identity") {
  const auto& g = linear_grid();
  const auto s = assemble_surface(g, IntensityMapping{1.0, 3.0, 0.0}, 4, 3);
  REQUIRE(s.pga.size() == 4);
  REQUIRE(s.threshold.size() == 3);
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t a = 0; a < 4; ++a) CHECK(s.at(t, a) == g.at(t, 3 - a));
}

TEST_CASE("assembly makes no limit-state calls and needs a full grid") {
  auto g = linear_grid();
  const auto before = g.calls;
  assemble_surface(g, IntensityMapping{}, 10, 10);
  CHECK(g.calls == before);
  g.probability[4] = std::numeric_limits<double>::quiet_NaN();
  try {
    assemble_surface(g, IntensityMapping{}, 10, 10);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("(1, 0)") != std::string::npos);
  }
}

TEST_CASE("curves slice the surface") {
  const auto s = assemble_surface(linear_grid(), IntensityMapping{1.0, 3.0, 0.0}, 12, 9);
  const auto exact = extract_curve(s, s.threshold[3]);
  for (std::size_t a = 0; a < s.pga.size(); ++a) CHECK(exact.probability[a] == s.at(3, a));
  const double mid = 0.5 * (s.threshold[3] + s.threshold[4]);
  const auto half = extract_curve(s, mid);
  for (std::size_t a = 0; a < s.pga.size(); ++a) {
    CHECK(half.probability[a] == doctest::Approx(0.5 * (s.at(3, a) + s.at(4, a))));
    if (a > 0) CHECK(half.probability[a] >= half.probability[a - 1]);
  }
  CHECK_THROWS_AS(extract_curve(s, s.threshold.back() + 0.1), RangeError);
  CHECK_THROWS_AS(extract_curve(s, s.threshold.front() - 0.1), RangeError);
}

TEST_CASE("JSON export round-trips exactly") {
  const RunMetadata meta{99, 1234, "00ff00ff00ff00ff"};
  const auto s = assemble_surface(linear_grid(), IntensityMapping{0.05, 3.0, 0.00125}, 17, 11, meta);
  const auto path = temp("roundtrip.json");
  write_json(s, path);
  const auto back = read_json(path);
  CHECK(back == s);
  CHECK(back.metadata.config_hash == "00ff00ff00ff00ff");
  fs::remove(path);
}

TEST_CASE("CSV layout") {
  const auto s = assemble_surface(linear_grid(), IntensityMapping{0.05, 3.0, 0.0}, 6, 5);
  const auto path = temp("surface.csv");
  write_csv(s, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "pga_g,threshold_m,probability");
  std::size_t rows = 0;
  std::getline(in, line);
  CHECK(line.rfind("0.05,", 0) == 0);
  ++rows;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 30);
  fs::remove(path);

  FragilitySurface empty;
  write_csv(empty, path);
  std::ifstream again(path);
  std::stringstream all;
  all << again.rdbuf();
  CHECK(all.str() == "pga_g,threshold_m,probability\n");
  fs::remove(path);
}

TEST_CASE("I/O failures surface") {
  const auto s = assemble_surface(linear_grid(), IntensityMapping{}, 4, 3);
  CHECK_THROWS_AS(write_json(s, "/nonexistent-dir/x.json"), IoError);
  CHECK_THROWS_AS(read_json("/nonexistent-dir/x.json"), IoError);
  const auto bad = temp("bad.json");
  std::ofstream(bad) << "{\"format\": 3";
  CHECK_THROWS_AS(read_json(bad), ConfigError);
  fs::remove(bad);
}
