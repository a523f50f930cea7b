#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ris/errors.hpp"
#include "ris/failure_ratio.hpp"
#include "ris/oracle.hpp"

using namespace ris;

namespace {

std::vector<RatioPoint> cap_points(double beta, std::size_t n, std::initializer_list<double> radii) {
  std::vector<RatioPoint> out;
  for (double r : radii) out.push_back({r, cap_ratio(r, beta, n)});
  return out;
}

}  // namespace

TEST_CASE("cap ratio is half the incomplete beta") {
  for (std::size_t n : {2u, 3u, 50u, 1000u})
    for (double r : {3.5, 10.0, 40.0}) {
      const double b = 3.0;
      const double want = 0.5 * boost::math::ibeta((n - 1) / 2.0, 0.5, 1.0 - b * b / (r * r));
      CHECK(cap_ratio(r, b, n) == doctest::Approx(want).epsilon(1e-11));
    }
  CHECK(cap_ratio(3.0, 3.0, 10) == 0.0);
  CHECK(cap_ratio(2.0, 3.0, 10) == 0.0);
  CHECK(cap_ratio(1e12, 3.0, 10) == doctest::Approx(0.5));
}

TEST_CASE("low-branch fit recovers the plane distance") {
  const std::size_t n = 1000;
  const double beta = 3.0;
  const auto pts = cap_points(beta, n, {60.0, 80.0, 100.0, 126.0});
  const auto m = fit_failure_ratio(pts, RatioBranch::low, n);
  CHECK(m.terms() == 1);
  CHECK(m.radii[0] == doctest::Approx(beta).epsilon(1e-6));
  for (const auto& p : pts) CHECK(m(p.radius) == doctest::Approx(p.ratio).epsilon(1e-5));
}

TEST_CASE("two planes need two terms") {
  const std::size_t n = 20;
  std::vector<RatioPoint> pts;
  for (double r : {4.0, 5.0, 6.0, 8.0, 11.0, 15.0, 20.0}) pts.push_back({r, cap_ratio(r, 2.0, n) + cap_ratio(r, 3.5, n)});
  const auto m = fit_failure_ratio(pts, RatioBranch::low, n);
  REQUIRE(m.terms() == 2);
  CHECK(m.radii[0] == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(m.radii[1] == doctest::Approx(3.5).epsilon(1e-3));
}

TEST_CASE("high branch describes ratios above one half") {
  // theta = 1 - cap(a - r, b): the complement of a cap seen from a shifted centre
  const std::size_t n = 10;
  const double a = 30.0, b = 2.0;
  std::vector<RatioPoint> pts;
  for (double r : {5.0, 10.0, 15.0, 20.0, 25.0}) pts.push_back({r, 1.0 - cap_ratio(a - r, b, n)});
  const auto m = fit_failure_ratio_terms(pts, RatioBranch::high, n, 1);
  for (const auto& p : pts) CHECK(m(p.radius) == doctest::Approx(p.ratio).epsilon(1e-4));
}

TEST_CASE("curve stitches the two branches monotonically") {
  const std::size_t n = 1000;
  std::vector<RatioPoint> pts;
  for (double r : {45.0, 55.0, 70.0}) pts.push_back({r, cap_ratio(r, 3.0, n)});
  for (double r : {150.0, 200.0}) pts.push_back({r, 0.7 + 0.001 * r});
  const auto curve = FailureRatioCurve::fit(pts, n);
  CHECK(curve.has_low());
  CHECK(curve.has_high());
  double prev = 0.0;
  for (double r = 35.0; r <= 220.0; r += 5.0) {
    const double v = curve(r);
    CHECK(v >= prev - 1e-12);
    CHECK(v <= 1.0);
    prev = v;
  }
  CHECK(curve(55.0) == doctest::Approx(cap_ratio(55.0, 3.0, n)).epsilon(1e-3));
}

TEST_CASE("extrapolated xi solves the ratio equation") {
  const std::size_t n = 1000;
  const double beta = 3.0, R = std::sqrt(1000.0);
  const auto theta = [&](double r) { return halfspace_cap_ratio(r, beta, n); };
  const double xi = extrapolate_xi(theta, 3.0, 0.25, R);
  CHECK(theta(xi * R) == doctest::Approx(0.25 * theta(3.0 * R)).epsilon(1e-9));
  CHECK(xi < 3.0);
  CHECK(xi > 1.0);
  // already below target at xi = 1
  CHECK(extrapolate_xi([](double) { return 0.5; }, 2.0, 0.25, R) == 1.0);
  CHECK_THROWS_AS(extrapolate_xi(theta, 3.0, 1.5, R), ConfigError);
  CHECK_THROWS_AS(extrapolate_xi([](double) { return 0.0; }, 2.0, 0.25, R), ContractViolation);
}

TEST_CASE("too few points for a fit") {
  const std::vector<RatioPoint> none;
  CHECK_THROWS_AS(fit_failure_ratio(none, RatioBranch::low, 10), FitError);
}
