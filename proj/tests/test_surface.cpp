#include <cmath>
#include <vector>

#include "doctest.h"
#include "ris/errors.hpp"
#include "ris/oracle.hpp"
#include "ris/problem.hpp"
#include "ris/strategies.hpp"
#include "ris/surface.hpp"

using namespace ris;

TEST_CASE("uniform axes end on the terminal values") {
  const auto a = SurfaceAxes::uniform(2.0, 5, 4.0, 4);
  CHECK(a.epsilon == std::vector<double>{2.0, 1.5, 1.0, 0.5, 0.0});
  CHECK(a.xi == std::vector<double>{4.0, 3.0, 2.0, 1.0});
  CHECK_NOTHROW(a.validate());
  CHECK_THROWS_AS((SurfaceAxes{{1.0, 0.5}, {2.0, 1.0}}.validate()), ConfigError);
  CHECK_THROWS_AS((SurfaceAxes{{1.0, 0.0}, {2.0, 2.0, 1.0}}.validate()), ConfigError);
}

TEST_CASE("cells are located by the upper-left node") {
  const auto a = SurfaceAxes::uniform(2.0, 3, 3.0, 3);  // eps 2,1,0  xi 3,2,1
  CHECK(locate_cell(a, 1.5, 2.5) == std::pair<std::size_t, std::size_t>{0, 0});
  CHECK(locate_cell(a, 0.0, 1.0) == std::pair<std::size_t, std::size_t>{1, 1});
  CHECK(locate_cell(a, 2.0, 3.0) == std::pair<std::size_t, std::size_t>{0, 0});
  CHECK(locate_cell(a, 1.0, 2.0) == std::pair<std::size_t, std::size_t>{1, 1});
  CHECK_THROWS_AS(locate_cell(a, 2.5, 2.0), RangeError);
  CHECK_THROWS_AS(locate_cell(a, 1.0, 0.5), RangeError);
}

TEST_CASE("IS-I with a single xi node is crude Monte Carlo plus subset steps") {
  const auto p = make_linear_problem(2.0, 2);
  SurfaceConfig c;
  c.samples_per_level = 2000;
  const RandomStream rng(3);
  const auto g = is_one(p, SurfaceAxes{{0.0}, {1.0}}, c, rng);
  const auto crude = estimate_initial_level(p, 2000, 1.0, 0.0, crude_stream(rng));
  CHECK(g.at(0, 0) == crude.probability);
  CHECK(g.calls == 2000);
}

TEST_CASE("IS-I grid on the scaled halfspace") {
  const double beta = 3.0;
  const auto p = make_linear_problem(beta, 2);
  const auto axes = SurfaceAxes::uniform(2.0, 3, 4.0, 4);
  SurfaceConfig c;
  c.samples_per_level = 500;
  const auto g = is_one(p, axes, c, RandomStream(12));
  REQUIRE(g.complete());
  std::uint64_t sum = 0;
  for (const auto& l : g.route) sum += l.calls;
  CHECK(sum == g.calls);
  CHECK(g.calls == p.calls());
  for (std::size_t i = 0; i < axes.rows(); ++i)
    for (std::size_t j = 0; j < axes.columns(); ++j) {
      const double exact = scaled_linear_surface(axes.epsilon[i], axes.xi[j], beta);
      CAPTURE(i);
      CAPTURE(j);
      CHECK(std::fabs(std::log(g.at(i, j) / exact)) < 0.6);
    }
  // nodes return the stored value; off-grid values stay in range
  CHECK(query_surface(g, 1.0, 2.0) == g.at(1, 2));
  const double q = is_one_query(g, 0.7, 2.6);
  CHECK(q > 0.0);
  CHECK(q < 1.0);
  CHECK(std::fabs(std::log(q / scaled_linear_surface(0.7, 2.6, beta))) < 0.8);
  CHECK_THROWS_AS(is_one_query(g, 0, 0, 0.5, 2.5), RangeError);
  CHECK_THROWS_AS(query_surface(g, 3.0, 2.0), RangeError);
}

TEST_CASE("IS-I refuses high dimensions") {
  const auto p = make_linear_problem(3.0, 25);
  CHECK_THROWS_AS(is_one(p, SurfaceAxes::uniform(1.0, 2, 2.0, 2), SurfaceConfig{}, RandomStream(1)), ConfigError);
}

TEST_CASE("IS-II on the 1000-D halfspace") {
  const double beta = 3.0;
  const auto p = make_linear_problem(beta, 1000);
  const auto axes = SurfaceAxes::uniform(1.0, 2, 3.0, 3);
  SurfaceConfig c;
  c.samples_per_level = 400;
  const auto g = is_two(p, axes, c, RandomStream(4));
  REQUIRE(g.complete());
  CHECK(g.calls == p.calls());
  REQUIRE(g.row_curves.size() == axes.rows());
  // single runs scatter at the deep corner; compare a 10-run mean there
  std::vector<double> mean(g.probability.size(), 0.0);
  double q = 0.0;
  for (std::size_t r = 0; r < 10; ++r) {
    const auto rep = is_two(p.fresh(), axes, c, RandomStream(4, r));
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += rep.probability[k] / 10.0;
    q += is_two_query(rep, 0.4, 1.5) / 10.0;
  }
  for (std::size_t i = 0; i < axes.rows(); ++i)
    for (std::size_t j = 0; j < axes.columns(); ++j) {
      const double exact = scaled_linear_surface(axes.epsilon[i], axes.xi[j], beta);
      CHECK(std::fabs(std::log(g.at(i, j) / exact)) < 1.0);
      CHECK(std::fabs(std::log(mean[i * axes.columns() + j] / exact)) < 0.3);
    }
  CHECK(std::fabs(std::log(q / scaled_linear_surface(0.4, 1.5, beta))) < 0.3);
  CHECK(query_surface(g, 0.0, 1.0) == g.at(1, 2));
  const auto run = surface_run_result(g);
  CHECK(run.pf == g.probability.back());
  CHECK(run.kind == ScheduleKind::spherical_eps_xi);
}

TEST_CASE("surface runs do not depend on jobs") {
  const auto p = make_linear_problem(2.0, 2);
  const auto axes = SurfaceAxes::uniform(1.0, 2, 3.0, 3);
  SurfaceConfig c;
  c.samples_per_level = 200;
  const auto a = is_one(p, axes, c, RandomStream(6));
  c.jobs = 3;
  const auto b = is_one(p, axes, c, RandomStream(6));
  CHECK(a.probability == b.probability);
  CHECK(a.calls == b.calls);
}
