#ifndef RIS_RELAXATION_HPP
#define RIS_RELAXATION_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ris/problem.hpp"
#include "ris/random.hpp"
#include "ris/sampler.hpp"

namespace ris {

enum class ScheduleKind { indicator_threshold, smooth_sigma, pdf_scale, coupled_eps_xi, spherical_eps_xi };

/**
 * One stage of a relaxation schedule. Record k carries the (k+1)-th relaxation
 * value, the probability P_{k+1} of that relaxed event, and the ratio
 * P_{k+1} / P_k (P_0 = 1) together with the samples it was estimated from
 * and the limit-state calls spent producing them.
 */
struct LevelRecord {
  std::size_t index = 0;
  double lambda = 0.0;
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  double xi = std::numeric_limits<double>::quiet_NaN();
  std::vector<ChainState> samples;
  double probability = 0.0;
  double ratio = 0.0;
  std::uint64_t calls = 0;
  double acceptance = 0.0;
  double step_size = 0.0;
};

struct RunResult {
  ScheduleKind kind = ScheduleKind::indicator_threshold;
  double pf = 0.0;
  std::vector<LevelRecord> levels;
  std::uint64_t calls = 0;
  std::vector<std::string> warnings;
};

struct EstimateStats {
  double mean = 0.0;
  double cov = 0.0;
  double mean_calls = 0.0;
  std::vector<double> estimates;
  std::vector<std::uint64_t> calls;
  std::vector<std::string> warnings;
  std::vector<LevelRecord> trace;  // levels of replication 0, samples dropped

  /// Standard error of the replication mean.
  double standard_error() const;
};

/// N crude draws scale * z with z standard normal from `rng`, evaluated
/// through `value` (parallel over samples, ordered by index).
std::vector<ChainState> draw_crude(std::size_t count, std::size_t dimension, double scale,
                                   const std::function<double(std::span<const double>)>& value,
                                   const RandomStream& rng, std::size_t jobs = 1);

struct InitialLevel {
  double probability = 0.0;
  std::vector<ChainState> draws;      // all crude draws with their G-values
  std::vector<ChainState> in_event;   // draws with G <= threshold
};

/**
 * Crude Monte Carlo of P(G(scale * z) <= threshold). Throws ConfigError for
 * count == 0 and InitializationError when no draw lands in the event.
 */
InitialLevel estimate_initial_level(const ReliabilityProblem& problem, std::size_t count, double scale,
                                    double threshold, const RandomStream& rng, std::size_t jobs = 1);

/// Order statistic ceil(p N) of the values (lower convention), clamped below
/// at `terminal`.
double adapt_quantile_lambda(std::span<const double> values, double p, double terminal = 0.0);

/// Population coefficient of variation of exp(log_weights).
double weight_cov(std::span<const double> log_weights);

/**
 * Finds lambda' in [lo, hi) with CoV(weights(lambda')) = delta by a coarse scan
 * followed by bisection. Returns lo when CoV(lo) <= delta. When the scanned
 * CoV curve is non-monotone the smallest crossing is used and a message is
 * appended to `warnings`.
 */
double adapt_weight_cov_lambda(const std::function<double(double)>& cov_at, double lo, double hi, double delta,
                               std::vector<std::string>* warnings = nullptr);

/// Sample mean of the weights. Throws DegenerateLevelError if all vanish.
double estimate_ratio(std::span<const double> weights);
/// Same from log-weights, accumulated stably.
double estimate_ratio_log(std::span<const double> log_weights);

/// Product of the recorded ratios; log space only when the plain product underflows.
double chain_product(std::span<const LevelRecord> levels);
double chain_log_product(std::span<const LevelRecord> levels);

/// Systematic resampling of `count` indices proportional to exp(log_weights).
std::vector<std::size_t> systematic_resample(std::span<const double> log_weights, std::size_t count,
                                             RandomStream& rng);

using Runner = std::function<RunResult(const RandomStream&)>;

/**
 * Runs R independent replications, replication r on RandomStream(seed, r),
 * and summarizes them. CoV is the across-run sample CoV. Throws ConfigError
 * for R < 2.
 */
EstimateStats replicate_and_cov(const Runner& runner, std::size_t replications, std::uint64_t seed,
                                std::size_t jobs = 1);

}  // namespace ris

#endif  // RIS_RELAXATION_HPP
