#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "ris/errors.hpp"
#include "ris/problem.hpp"
#include "ris/relaxation.hpp"

using namespace ris;

TEST_CASE("quantile step is the ceil(pN) order statistic") {
  std::vector<double> v;
  for (int k = 10; k >= 1; --k) v.push_back(k);
  CHECK(adapt_quantile_lambda(v, 0.1) == 1.0);
  CHECK(adapt_quantile_lambda(v, 0.25) == 3.0);
  CHECK(adapt_quantile_lambda(v, 0.1, 2.5) == 2.5);
  CHECK_THROWS_AS(adapt_quantile_lambda(v, 1.0), ConfigError);
  CHECK_THROWS_AS(adapt_quantile_lambda(std::vector<double>{}, 0.1), ConfigError);
}

TEST_CASE("weight CoV") {
  CHECK(weight_cov(std::vector<double>{0.0, 0.0, 0.0}) == 0.0);
  // weights 1 and 3: mean 2, sd 1
  CHECK(weight_cov(std::vector<double>{0.0, std::log(3.0)}) == doctest::Approx(0.5));
  // shifting all log weights changes nothing
  CHECK(weight_cov(std::vector<double>{-800.0, -800.0 + std::log(3.0)}) == doctest::Approx(0.5));
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(std::isinf(weight_cov(std::vector<double>{ninf, ninf})));
}

TEST_CASE("CoV-adapted step finds the crossing") {
  const auto cov = [](double l) { return 4.0 - l; };  // decreasing in lambda
  CHECK(adapt_weight_cov_lambda(cov, 0.0, 3.0, 1.5) == doctest::Approx(2.5).epsilon(1e-10));
  CHECK(adapt_weight_cov_lambda(cov, 3.0, 4.0, 1.5) == 3.0);
  CHECK_THROWS_AS(adapt_weight_cov_lambda(cov, 1.0, 1.0, 1.5), ConfigError);
  std::vector<std::string> warnings;
  const auto bumpy = [](double l) { return (l > 0.2 && l < 0.4) || l > 0.7 ? 0.5 : 2.0; };
  const double got = adapt_weight_cov_lambda(bumpy, 0.0, 1.0, 1.0, &warnings);
  CHECK(got == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(warnings.size() == 1);
}

TEST_CASE("ratio estimates") {
  CHECK(estimate_ratio(std::vector<double>{0.0, 1.0, 0.5}) == doctest::Approx(0.5));
  CHECK(estimate_ratio_log(std::vector<double>{std::log(0.2), std::log(0.4)}) == doctest::Approx(0.3));
  CHECK(estimate_ratio_log(std::vector<double>{-1000.0, -1000.0}) == doctest::Approx(std::exp(-1000.0)));
  CHECK_THROWS_AS(estimate_ratio(std::vector<double>{0.0, 0.0}), DegenerateLevelError);
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(estimate_ratio_log(std::vector<double>{ninf}), DegenerateLevelError);
}

TEST_CASE("chain product multiplies the level ratios") {
  std::vector<LevelRecord> levels(3);
  levels[0].ratio = 0.1;
  levels[1].ratio = 0.2;
  levels[2].ratio = 0.5;
  CHECK(chain_product(levels) == doctest::Approx(0.01));
  CHECK(chain_log_product(levels) == doctest::Approx(std::log(0.01)));
}

TEST_CASE("systematic resampling follows the weights") {
  RandomStream rng(4);
  const std::vector<double> lw = {std::log(1.0), std::log(3.0), -std::numeric_limits<double>::infinity()};
  const auto picks = systematic_resample(lw, 400, rng);
  REQUIRE(picks.size() == 400);
  const auto ones = std::count(picks.begin(), picks.end(), std::size_t{1});
  CHECK(std::count(picks.begin(), picks.end(), std::size_t{2}) == 0);
  CHECK(std::abs(ones - 300) <= 1);
  CHECK(std::is_sorted(picks.begin(), picks.end()));
}

TEST_CASE("crude level counts the event") {
  const auto p = make_linear_problem(1.0, 2);
  const auto level = estimate_initial_level(p, 20000, 1.0, 0.0, RandomStream(6));
  const double exact = 0.15865525393145707;
  CHECK(std::fabs(level.probability - exact) < 3.0 * std::sqrt(exact * (1 - exact) / 20000));
  CHECK(level.draws.size() == 20000);
  CHECK(p.calls() == 20000);
  for (const auto& s : level.in_event) CHECK(s.g <= 0.0);
  const auto far = make_linear_problem(40.0, 2);
  CHECK_THROWS_AS(estimate_initial_level(far, 100, 1.0, 0.0, RandomStream(6)), InitializationError);
}

TEST_CASE("crude draws do not depend on jobs") {
  const auto f = [](std::span<const double> x) { return x[0] + 2.0 * x[1]; };
  const auto a = draw_crude(500, 2, 1.5, f, RandomStream(3), 1);
  const auto b = draw_crude(500, 2, 1.5, f, RandomStream(3), 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].g == b[i].g);
  }
}

TEST_CASE("replication summary") {
  const Runner runner = [](const RandomStream& rng) {
    RandomStream r = rng;
    RunResult out;
    out.pf = 1.0 + r.uniform();
    out.calls = 10;
    return out;
  };
  const auto s = replicate_and_cov(runner, 200, 1);
  CHECK(s.estimates.size() == 200);
  CHECK(s.mean_calls == 10.0);
  CHECK(std::fabs(s.mean - 1.5) < 3.0 * std::sqrt(1.0 / 12.0 / 200));
  CHECK(s.cov == doctest::Approx(std::sqrt(1.0 / 12.0) / 1.5).epsilon(0.15));
  CHECK(s.standard_error() == doctest::Approx(s.cov * s.mean / std::sqrt(200.0)));
  const auto again = replicate_and_cov(runner, 200, 1, 4);
  CHECK(again.estimates == s.estimates);
  CHECK_THROWS_AS(replicate_and_cov(runner, 1, 1), ConfigError);
}
