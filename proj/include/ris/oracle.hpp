#ifndef RIS_ORACLE_HPP
#define RIS_ORACLE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ris/problem.hpp"
#include "ris/random.hpp"

namespace ris {

struct DirectMcResult {
  double probability = 0.0;
  double cov = 0.0;  // sqrt((1 - p) / (N p)); NaN when there are no hits
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  bool zero_hits = false;

  double standard_error() const noexcept;
};

/// Hit fraction of G(scale z) <= threshold over N standard normal z. Draws
/// come in fixed batches of 4096, batch b from rng.substream(b), so the
/// result does not depend on `jobs`.
DirectMcResult direct_mc(const ReliabilityProblem& problem, std::size_t samples, const RandomStream& rng,
                         double scale = 1.0, double threshold = 0.0, std::size_t jobs = 1);

/// One pass of draws scored against several thresholds.
std::vector<DirectMcResult> direct_mc_thresholds(const ReliabilityProblem& problem, std::size_t samples,
                                                 const RandomStream& rng, double scale,
                                                 std::span<const double> thresholds, std::size_t jobs = 1);

/// Phi(-beta).
double halfspace_probability(double beta);
/// P(beta - e.x <= eps) for x ~ N(0, xi^2 I): Phi((eps - beta) / xi).
double scaled_linear_surface(double eps, double xi, double beta);
/// Fraction of the radius-r sphere in R^n beyond a plane at distance beta.
double halfspace_cap_ratio(double r, double beta, std::size_t n);

/**
 * Named closed forms: "linear-halfspace" {beta}, "scaled-linear-surface"
 * {eps, xi, beta}, "halfspace-cap-ratio" {r, beta, n}. Throws ConfigError for
 * an unknown case or a wrong argument count.
 */
double analytic_oracle(std::string_view case_id, std::span<const double> args);

/// P(d - x2 - (x1 - 0.1)^2 / 2 <= 0) by adaptive Simpson quadrature over x1.
double parabolic_probability(double d);

}  // namespace ris

#endif  // RIS_ORACLE_HPP
