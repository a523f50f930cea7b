#include <cmath>
#include <vector>

#include "doctest.h"
#include "ris/errors.hpp"
#include "ris/problem.hpp"

using namespace ris;

TEST_CASE("parabolic limit state") {
  const std::vector<double> x = {0.1, 0.0};
  CHECK(parabolic_lsf(x, 5.0) == 5.0);
  const std::vector<double> y = {2.1, 1.0};
  CHECK(parabolic_lsf(y, 5.0) == doctest::Approx(5.0 - 1.0 - 2.0));
  CHECK_THROWS_AS(parabolic_lsf(std::vector<double>{1.0}, 5.0), DomainError);
}

TEST_CASE("linear limit state along the diagonal") {
  const auto p = make_linear_problem(3.0, 4);
  CHECK(p.dimension() == 4);
  const std::vector<double> x = {1.5, 1.5, 1.5, 1.5};  // e.x = 3
  CHECK(p(x) == doctest::Approx(0.0).scale(1.0));
  const std::vector<double> e = {0.6, 0.8};
  CHECK(linear_lsf(std::vector<double>{1.0, 1.0}, 2.0, e) == doctest::Approx(0.6));
  CHECK_THROWS_AS(linear_lsf(std::vector<double>{1.0, 1.0}, 2.0, std::vector<double>{1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(make_linear_problem(2.0, std::vector<double>{}), ConfigError);
}

TEST_CASE("call counter and copies") {
  auto p = make_parabolic_problem(5.0);
  const std::vector<double> x = {0.0, 0.0};
  p(x);
  p(x);
  CHECK(p.calls() == 2);
  const ReliabilityProblem copy = p;
  CHECK(copy.calls() == 2);
  copy(x);
  CHECK(copy.calls() == 3);
  CHECK(p.calls() == 2);
  const auto fresh = p.fresh();
  CHECK(fresh.calls() == 0);
  p.reset_calls();
  CHECK(p.calls() == 0);
}

TEST_CASE("dimension mismatch is reported") {
  const auto p = make_linear_problem(1.0, 3);
  CHECK_THROWS_AS(p(std::vector<double>{1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(ReliabilityProblem("x", 0, [](std::span<const double>) { return 0.0; }), ConfigError);
}
