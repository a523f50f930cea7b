#ifndef RIS_STRATEGIES_HPP
#define RIS_STRATEGIES_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ris/problem.hpp"
#include "ris/random.hpp"
#include "ris/relaxation.hpp"
#include "ris/sampler.hpp"

namespace ris {

struct StrategyConfig {
  std::size_t samples_per_level = 1000;  // N
  double level_probability = 0.1;        // p; seeds per level = ceil(p N)
  double delta_target = 1.5;             // SIS / AIS weight CoV target
  std::size_t max_levels = 50;
  /// Most relaxed value: SS first threshold, SIS first sigma, AIS first scale.
  /// Setting it to the terminal value collapses the run to crude Monte Carlo.
  std::optional<double> initial_relaxation;
  double ais_min_fraction = 0.05;  // accept a doubled scale once this many crude draws fail
  double ais_max_scale = 64.0;
  KernelConfig kernel;             // indicator HMC
  double smooth_step = 0.5;        // initial pCN sigma for SIS
  bool keep_samples = false;       // retain per-level samples in the result
  std::size_t jobs = 1;

  std::size_t seeds_per_level() const;
  void validate() const;
};

/// Threshold schedule (lambda_j, P_j) byproduct, a discretized CDF of G.
std::vector<std::pair<double, double>> cdf_points(const RunResult& run);
/// Scale schedule (lambda_j, P_j) byproduct, a discretized fragility curve.
std::vector<std::pair<double, double>> fragility_points(const RunResult& run);

/// Thresholds at the p-quantile of G, nested indicator levels, HMC seeds.
/// Throws NonConvergenceError past max_levels.
RunResult subset_simulation(const ReliabilityProblem& problem, const StrategyConfig& config, const RandomStream& rng);

/// Smoothed indicator Phi(-G / lambda) with CoV-adapted lambda down to 0; the
/// last ratio uses the hard indicator.
RunResult sequential_is(const ReliabilityProblem& problem, const StrategyConfig& config, const RandomStream& rng);

/// Input scale lambda decreasing to 1 with CoV-adapted steps. lambda_1 is
/// doubled from 2 up to ais_max_scale unless fixed by initial_relaxation;
/// throws InitializationError if no candidate reaches ais_min_fraction.
RunResult annealed_is(const ReliabilityProblem& problem, const StrategyConfig& config, const RandomStream& rng);

/// Stream used for the crude level by every strategy.
RandomStream crude_stream(const RandomStream& rng);

}  // namespace ris

#endif  // RIS_STRATEGIES_HPP
