#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "ris/config.hpp"
#include "ris/errors.hpp"

using namespace ris;
using nlohmann::json;

TEST_CASE("problem strings") {
  const auto p = parse_problem("parabolic:d=7");
  CHECK(p.type == "parabolic");
  CHECK(p.threshold == 7.0);
  CHECK(resolved_threshold(parse_problem("parabolic")) == 5.0);

  const auto l = parse_problem("linear:beta=3,n=1000");
  CHECK(l.dimension == 1000);
  CHECK(build_problem(l).dimension() == 1000);

  const auto s = parse_problem("seismic:excitation=white-noise,n=200,b_uy=1.5");
  CHECK(s.excitation == "white-noise");
  CHECK(s.dimension == 200);
  CHECK(s.threshold == doctest::Approx(1.5 * 1.25e-3));
  CHECK(parse_problem("seismic").dimension == 2);
  CHECK(parse_problem("seismic:excitation=white-noise").dimension == 1000);
  CHECK(base_intensity(s) == 0.05);
  CHECK(base_intensity(l) == 1.0);

  CHECK_THROWS_AS(parse_problem("cubic"), ConfigError);
  CHECK_THROWS_AS(parse_problem("linear:d=3"), ConfigError);
  CHECK_THROWS_AS(parse_problem("linear:beta=abc"), ConfigError);
  CHECK_THROWS_AS(parse_problem("seismic:excitation=pulse"), ConfigError);
  CHECK_THROWS_AS(build_problem(parse_problem("seismic:excitation=records,n=3")), ConfigError);
}

TEST_CASE("input scale wraps the limit state") {
  auto spec = parse_problem("linear:beta=2,n=2");
  spec.input_scale = 2.0;
  const auto p = build_problem(spec);
  const std::vector<double> x = {0.5, 0.5};  // e.x = 1/sqrt(2)
  CHECK(p(x) == doctest::Approx(2.0 - 2.0 * std::sqrt(0.5)));
}

TEST_CASE("config documents") {
  const json doc = json::parse(R"({
    "problem": "parabolic:d=9",
    "method": "ss",
    "seed": 7,
    "reps": 20,
    "schedule": {"samples_per_level": 500, "level_probability": 0.2, "rho": 0.3},
    "kernel": {"leapfrog_steps": 5},
    "fragility": {"threshold_uy": [1, 2], "grid": [4, 3], "curves_uy": [1.5]}
  })");
  const auto c = parse_config(doc);
  CHECK(c.method == "ss");
  CHECK(c.seed == 7);
  CHECK(c.reps == 20);
  CHECK(c.strategy.samples_per_level == 500);
  CHECK(c.strategy.level_probability == 0.2);
  CHECK(c.surface.level_probability == 0.2);
  CHECK(c.surface.rho == 0.3);
  CHECK(c.strategy.kernel.leapfrog_steps == 5);
  CHECK(c.surface.kernel.leapfrog_steps == 5);
  REQUIRE(c.threshold_range);
  CHECK((*c.threshold_range)[1] == doctest::Approx(2.5e-3));
  CHECK(c.grid_intensity == 4);
  CHECK(c.curves.size() == 1);

  CHECK_THROWS_AS(parse_config(json::parse(R"({"metod": "ss"})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"schedule": {"N": 5}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"seed": "x"})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"reps": -1})")), ConfigError);
}

TEST_CASE("canonical form round-trips and hashes stably") {
  RunConfig c;
  c.problem = parse_problem("linear:beta=3,n=10");
  c.method = "is2";
  c.seed = 11;
  c.intensity_range = std::array<double, 2>{1.0, 4.0};
  c.threshold_range = std::array<double, 2>{1.0, 3.0};
  c.curves = {2.0};
  const auto j = to_json(c);
  const auto back = parse_config(j);
  CHECK(to_json(back) == j);
  CHECK(config_hash(back) == config_hash(c));
  CHECK(config_hash(c).size() == 16);

  // a manifest wraps the config
  const json manifest = {{"command", "fragility"}, {"config", j}, {"calls", 5}};
  CHECK(config_hash(parse_config(manifest)) == config_hash(c));

  auto other = c;
  other.seed = 12;
  CHECK(config_hash(other) != config_hash(c));
  auto threads = c;
  threads.jobs = 7;
  CHECK(config_hash(threads) == config_hash(c));
}

TEST_CASE("config files") {
  const auto path = std::filesystem::temp_directory_path() / "ris_config_test.json";
  std::ofstream(path) << R"({"method": "sis", "seed": 3})";
  CHECK(load_config(path.string()).method == "sis");
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(load_config(path.string()), ConfigError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("number lists") {
  CHECK(parse_number_list("1, 2.5,3") == std::vector<double>{1.0, 2.5, 3.0});
  const auto v = parse_number_list("1uy,1.5uy,0.002", 1.25e-3);
  CHECK(v[1] == doctest::Approx(1.875e-3));
  CHECK(v[2] == 0.002);
  CHECK(parse_number_list("").empty());
  CHECK_THROWS_AS(parse_number_list("1uy"), ConfigError);
  CHECK_THROWS_AS(parse_number_list("1,x"), ConfigError);
}
