#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "ris/distributions.hpp"
#include "ris/errors.hpp"

using namespace ris;

TEST_CASE("sphere samples have unit norm") {
  RandomStream rng(3);
  for (std::size_t n : {2u, 3u, 10u, 1000u}) {
    for (int k = 0; k < 50; ++k) {
      const auto u = sample_uniform_sphere(n, rng);
      REQUIRE(u.size() == n);
      CHECK(std::fabs(std::sqrt(squared_norm(u)) - 1.0) < 1e-12);
    }
  }
  CHECK_THROWS_AS(sample_uniform_sphere(1, rng), DomainError);
}

TEST_CASE("sphere times chi radius is standard normal") {
  // moments of one coordinate of r u with r ~ chi_n, u uniform on the sphere
  RandomStream rng(5);
  const std::size_t n = 5;
  const int draws = 100000;
  double m1 = 0, m2 = 0, m4 = 0, cross = 0;
  for (int k = 0; k < draws; ++k) {
    auto u = sample_uniform_sphere(n, rng);
    const double r = sample_chi(n, rng);
    const double x0 = r * u[0], x1 = r * u[1];
    m1 += x0;
    m2 += x0 * x0;
    m4 += x0 * x0 * x0 * x0;
    cross += x0 * x1;
  }
  m1 /= draws; m2 /= draws; m4 /= draws; cross /= draws;
  CHECK(std::fabs(m1) < 3.0 / std::sqrt(draws));
  CHECK(std::fabs(m2 - 1.0) < 3.0 * std::sqrt(2.0 / draws));
  CHECK(std::fabs(m4 - 3.0) < 3.0 * std::sqrt(96.0 / draws));
  CHECK(std::fabs(cross) < 3.0 / std::sqrt(draws));
}

TEST_CASE("chi density integrates to one and peaks near sqrt(n - 1)") {
  for (std::size_t n : {1u, 2u, 7u, 100u, 1000u}) {
    const double mode = std::sqrt(std::max<double>(n, 1) - 1.0);
    const double lo = std::max(0.0, mode - 12.0), hi = mode + 12.0;
    const int steps = 20000;
    const double h = (hi - lo) / steps;
    double total = 0.0;
    for (int k = 0; k <= steps; ++k) {
      const double r = lo + k * h;
      const double w = (k == 0 || k == steps) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      if (r > 0.0) {
        total += w * std::exp(chi_log_pdf(r, n));
      } else if (n == 1) {
        total += w * std::sqrt(2.0 / M_PI);
      }
    }
    total *= h / 3.0;
    CAPTURE(n);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("chi samples have the chi mean") {
  RandomStream rng(9);
  const std::size_t n = 1000;
  const int draws = 20000;
  double sum = 0.0, sq = 0.0;
  for (int k = 0; k < draws; ++k) {
    const double r = sample_chi(n, rng);
    sum += r;
    sq += r * r;
  }
  CHECK(std::fabs(sq / draws - double(n)) < 3.0 * std::sqrt(2.0 * n / draws));
  CHECK(sum / draws == doctest::Approx(std::sqrt(n - 0.5)).epsilon(1e-3));
}

TEST_CASE("scaled gaussian log ratio agrees with the densities") {
  const std::vector<double> x = {0.3, -1.2, 2.0};
  const double s2 = squared_norm(x);
  for (double a : {1.0, 1.7, 4.0})
    for (double b : {1.0, 2.5}) {
      const double direct = scaled_gaussian_log_pdf(x, a) - scaled_gaussian_log_pdf(x, b);
      CHECK(scaled_gaussian_log_ratio(s2, x.size(), a, b) == doctest::Approx(direct).epsilon(1e-13));
    }
  CHECK(scaled_gaussian_log_pdf(std::vector<double>{0.0}, 1.0) == doctest::Approx(-0.5 * std::log(2.0 * M_PI)));
  CHECK_THROWS_AS(scaled_gaussian_log_pdf(x, 0.0), DomainError);
}

TEST_CASE("dot and squared norm") {
  const std::vector<double> a = {1, 2, 3}, b = {4, -5, 6};
  CHECK(dot(a, b) == 12.0);
  CHECK(squared_norm(a) == 14.0);
}
