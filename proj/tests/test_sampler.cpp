#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "ris/distributions.hpp"
#include "ris/errors.hpp"
#include "ris/sampler.hpp"
#include "ris/special.hpp"

using namespace ris;

namespace {

// x ~ N(0, xi^2 I_2) restricted to x1 >= a, drawn exactly
std::vector<ChainState> exact_seeds(std::size_t count, double xi, double a, RandomStream& rng) {
  std::vector<ChainState> out;
  const double tail = normal_cdf(-a / xi);
  for (std::size_t k = 0; k < count; ++k) {
    const double u = rng.uniform();
    const double x1 = -xi * normal_inv_cdf(u * tail);
    out.push_back({{x1, xi * rng.normal()}, a - x1, 0.0});
  }
  return out;
}

}  // namespace

TEST_CASE("leapfrog step cap keeps L steps under half a period") {
  for (std::size_t l : {1u, 5u, 10u, 40u}) CHECK(max_leapfrog_step(l) * l <= M_PI + 1e-12);
}

TEST_CASE("chain lengths split the budget") {
  const auto s = chain_lengths(100, 10);
  CHECK(std::accumulate(s.begin(), s.end(), std::size_t{0}) + 10 == 100);
  const auto t = chain_lengths(103, 10);
  CHECK(std::accumulate(t.begin(), t.end(), std::size_t{0}) + 10 == 103);
  CHECK_THROWS_AS(chain_lengths(5, 10), ConfigError);
}

TEST_CASE("indicator HMC never leaves the constraint") {
  RandomStream rng(1);
  const Constraint c{[](std::span<const double> x) { return 2.0 - x[0] - x[1]; }, 0.0};
  ChainState s{{1.5, 1.5}, c.value(std::vector<double>{1.5, 1.5}), 0.0};
  for (int k = 0; k < 2000; ++k) {
    hmc_indicator_step(s, 1.0, c, 0.2, 10, rng);
    REQUIRE(c.satisfied(s.g));
    REQUIRE(s.g == doctest::Approx(c.value(s.x)));
  }
  ChainState outside{{0.0, 0.0}, 2.0, 0.0};
  CHECK_THROWS_AS(hmc_indicator_step(outside, 1.0, c, 0.2, 10, rng), ContractViolation);
}

TEST_CASE("truncated Gaussian is stationary under indicator HMC") {
  const double a = 1.0;
  for (double xi : {1.0, 2.0}) {
    RandomStream rng(17);
    const std::size_t chains = 4000;
    auto seeds = exact_seeds(chains, xi, a, rng);
    const IndicatorKernel k{xi, Constraint{[a](std::span<const double> x) { return a - x[0]; }, 0.0}};
    const std::vector<std::size_t> steps(chains, 15);
    KernelConfig cfg;
    cfg.burn_in = 0;
    const auto run = run_chains(seeds, k, steps, cfg, RandomStream(23), 1);
    double m1 = 0.0, v2 = 0.0;
    for (std::size_t c = 0; c < chains; ++c) {
      const auto& last = run.samples[c * 16 + 15];
      m1 += last.x[0];
      v2 += last.x[1] * last.x[1];
    }
    m1 /= chains;
    v2 /= chains;
    // truncated normal mean and variance of x1
    const double al = a / xi;
    const double lambda = std::exp(-0.5 * al * al) / std::sqrt(2 * M_PI) / normal_cdf(-al);
    const double mean = xi * lambda;
    const double var = xi * xi * (1.0 + al * lambda - lambda * lambda);
    CAPTURE(xi);
    CHECK(std::fabs(m1 - mean) < 3.0 * std::sqrt(var / chains));
    CHECK(std::fabs(v2 - xi * xi) < 3.0 * xi * xi * std::sqrt(2.0 / chains));
  }
}

TEST_CASE("step adaptation lands near the target acceptance") {
  RandomStream rng(2);
  const double a = 0.5;
  auto seeds = exact_seeds(20, 1.0, a, rng);
  const IndicatorKernel k{1.0, Constraint{[a](std::span<const double> x) { return a - x[0]; }, 0.0}};
  const std::vector<std::size_t> steps(20, 200);
  KernelConfig cfg;
  cfg.burn_in = 50;
  const auto run = run_chains(seeds, k, steps, cfg, RandomStream(5), 1);
  CHECK(run.acceptance >= cfg.target_accept - 0.15);
  CHECK(run.acceptance <= cfg.target_accept + 0.15);
  CHECK(run.samples.size() == 20 * 201);
}

TEST_CASE("run_chains output does not depend on jobs") {
  RandomStream rng(3);
  auto seeds = exact_seeds(8, 1.0, 1.0, rng);
  const IndicatorKernel k{1.0, Constraint{[](std::span<const double> x) { return 1.0 - x[0]; }, 0.0}};
  const std::vector<std::size_t> steps(8, 30);
  const auto one = run_chains(seeds, k, steps, KernelConfig{}, RandomStream(9), 1);
  const auto four = run_chains(seeds, k, steps, KernelConfig{}, RandomStream(9), 4);
  REQUIRE(one.samples.size() == four.samples.size());
  for (std::size_t i = 0; i < one.samples.size(); ++i) CHECK(one.samples[i].x == four.samples[i].x);
  CHECK(one.new_calls == four.new_calls);
}

TEST_CASE("pCN smooth step leaves the tilted Gaussian invariant") {
  // w(g) = -g^2 / 2 with g = x: target N(0, 1/2)
  const SmoothKernel k{[](std::span<const double> x) { return x[0]; }, [](double g) { return -0.5 * g * g; }};
  RandomStream rng(12);
  const int chains = 4000;
  double sq = 0.0;
  for (int c = 0; c < chains; ++c) {
    const double x0 = std::sqrt(0.5) * rng.normal();
    ChainState s{{x0}, x0, -0.5 * x0 * x0};
    for (int t = 0; t < 10; ++t) mwg_smooth_step(s, k, 0.5, rng);
    sq += s.x[0] * s.x[0];
  }
  CHECK(std::fabs(sq / chains - 0.5) < 3.0 * 0.5 * std::sqrt(2.0 / chains));
  ChainState s{{0.0}, 0.0, 0.0};
  CHECK_THROWS_AS(mwg_smooth_step(s, k, 1.5, rng), DomainError);
}
