#include <cmath>
#include <vector>

#include "doctest.h"
#include "ris/errors.hpp"
#include "ris/oracle.hpp"
#include "ris/problem.hpp"
#include "ris/strategies.hpp"

using namespace ris;

namespace {

StrategyConfig small(std::size_t n = 500) {
  StrategyConfig c;
  c.samples_per_level = n;
  return c;
}

}  // namespace

TEST_CASE("terminal initial relaxation collapses every strategy to crude Monte Carlo") {
  const auto p = make_parabolic_problem(1.5);
  const RandomStream rng(31, 4);
  const auto crude = estimate_initial_level(p, 2000, 1.0, 0.0, crude_stream(rng));

  auto c = small(2000);
  c.initial_relaxation = 0.0;
  const auto ss = subset_simulation(p.fresh(), c, rng);
  const auto sis = sequential_is(p.fresh(), c, rng);
  c.initial_relaxation = 1.0;
  const auto ais = annealed_is(p.fresh(), c, rng);
  for (const auto* r : {&ss, &sis, &ais}) {
    CHECK(r->pf == crude.probability);
    CHECK(r->levels.size() == 1);
    CHECK(r->calls == 2000);
  }
}

TEST_CASE("subset simulation levels are nested") {
  const auto p = make_parabolic_problem(6.0);
  auto c = small();
  c.keep_samples = true;
  const auto r = subset_simulation(p, c, RandomStream(8));
  REQUIRE(r.levels.size() >= 3);
  CHECK(r.levels.back().lambda == 0.0);
  for (std::size_t k = 1; k < r.levels.size(); ++k) {
    CHECK(r.levels[k].lambda < r.levels[k - 1].lambda);
    CHECK(r.levels[k].probability < r.levels[k - 1].probability);
    for (const auto& s : r.levels[k].samples) REQUIRE(s.g <= r.levels[k - 1].lambda);
  }
  CHECK(r.pf == doctest::Approx(chain_product(r.levels)));
}

TEST_CASE("calls add up over the levels") {
  const auto p = make_parabolic_problem(4.0);
  for (auto* run : {&subset_simulation, &sequential_is, &annealed_is}) {
    const auto local = p.fresh();
    const auto r = (*run)(local, small(), RandomStream(2));
    std::uint64_t sum = 0;
    for (const auto& l : r.levels) sum += l.calls;
    CHECK(r.calls == sum);
    CHECK(r.calls == local.calls());
  }
}

TEST_CASE("results do not depend on jobs") {
  const auto p = make_parabolic_problem(4.0);
  for (auto* run : {&subset_simulation, &sequential_is, &annealed_is}) {
    auto c = small();
    const auto a = (*run)(p, c, RandomStream(5));
    c.jobs = 3;
    const auto b = (*run)(p, c, RandomStream(5));
    CHECK(a.pf == b.pf);
    CHECK(a.calls == b.calls);
  }
}

TEST_CASE("replication means are unbiased on the halfspace") {
  const auto p = make_linear_problem(2.5, 2);
  const double exact = halfspace_probability(2.5);
  for (auto* run : {&subset_simulation, &sequential_is, &annealed_is}) {
    const Runner r = [&](const RandomStream& rng) { return (*run)(p, small(), rng); };
    const auto s = replicate_and_cov(r, 40, 77);
    CHECK(std::fabs(s.mean - exact) < 3.0 * s.standard_error());
  }
}

TEST_CASE("fragility byproduct of annealed IS is monotone in the scale") {
  const auto p = make_parabolic_problem(5.0);
  const auto r = annealed_is(p, small(), RandomStream(3));
  const auto pts = fragility_points(r);
  REQUIRE(pts.size() == r.levels.size());
  CHECK(pts.back().first == 1.0);
  for (std::size_t k = 1; k < pts.size(); ++k) {
    CHECK(pts[k].first < pts[k - 1].first);
    CHECK(pts[k].second <= pts[k - 1].second);
  }
}

TEST_CASE("configuration errors and level cap") {
  const auto p = make_parabolic_problem(5.0);
  auto c = small();
  c.level_probability = 1.5;
  CHECK_THROWS_AS(subset_simulation(p, c, RandomStream(1)), ConfigError);
  c = small();
  c.max_levels = 2;
  CHECK_THROWS_AS(subset_simulation(make_linear_problem(6.0, 2), c, RandomStream(1)), NonConvergenceError);
  c = small();
  c.initial_relaxation = 0.5;
  CHECK_THROWS_AS(annealed_is(p, c, RandomStream(1)), ConfigError);
}
