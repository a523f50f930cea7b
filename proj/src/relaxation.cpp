#include "ris/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ris/distributions.hpp"
#include "ris/errors.hpp"
#include "ris/parallel.hpp"

namespace ris {

double EstimateStats::standard_error() const {
  if (estimates.size() < 2) return 0.0;
  return cov * std::fabs(mean) / std::sqrt(static_cast<double>(estimates.size()));
}

std::vector<ChainState> draw_crude(std::size_t count, std::size_t dimension, double scale,
                                   const std::function<double(std::span<const double>)>& value,
                                   const RandomStream& rng, std::size_t jobs) {
  if (count == 0) throw ConfigError("crude Monte Carlo needs at least one sample");
  if (!(scale > 0.0)) throw ConfigError("crude Monte Carlo: scale must be positive");
  std::vector<ChainState> draws(count);
  RandomStream stream = rng;
  for (auto& d : draws) {
    d.x.resize(dimension);
    fill_normal(d.x, stream);
    for (double& v : d.x) v *= scale;
  }
  parallel_for(count, jobs, [&](std::size_t i) { draws[i].g = value(draws[i].x); });
  return draws;
}

InitialLevel estimate_initial_level(const ReliabilityProblem& problem, std::size_t count, double scale,
                                    double threshold, const RandomStream& rng, std::size_t jobs) {
  InitialLevel level;
  level.draws = draw_crude(count, problem.dimension(), scale,
                           [&problem](std::span<const double> x) { return problem(x); }, rng, jobs);
  for (const auto& d : level.draws) {
    if (d.g <= threshold) level.in_event.push_back(d);
  }
  if (level.in_event.empty()) {
    throw InitializationError("no crude sample reached the relaxed event; use a larger initial relaxation");
  }
  level.probability = static_cast<double>(level.in_event.size()) / static_cast<double>(count);
  return level;
}

double adapt_quantile_lambda(std::span<const double> values, double p, double terminal) {
  if (values.empty()) throw ConfigError("adapt_quantile_lambda: no values");
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("adapt_quantile_lambda: p must lie in (0, 1)");
  std::vector<double> sorted(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size())));
  const std::size_t k = std::clamp<std::size_t>(rank, 1, sorted.size()) - 1;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end());
  return std::max(sorted[k], terminal);
}

double weight_cov(std::span<const double> log_weights) {
  if (log_weights.empty()) return 0.0;
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  if (!std::isfinite(top)) return std::numeric_limits<double>::infinity();
  double sum = 0.0, sum_sq = 0.0;
  for (double lw : log_weights) {
    const double w = std::exp(lw - top);
    sum += w;
    sum_sq += w * w;
  }
  const double n = static_cast<double>(log_weights.size());
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return std::sqrt(var) / mean;
}

double adapt_weight_cov_lambda(const std::function<double(double)>& cov_at, double lo, double hi, double delta,
                               std::vector<std::string>* warnings) {
  if (!(hi > lo)) throw ConfigError("adapt_weight_cov_lambda: empty bracket");
  if (!(delta > 0.0)) throw ConfigError("adapt_weight_cov_lambda: delta must be positive");
  if (cov_at(lo) <= delta) return lo;

  constexpr int kScan = 32;
  std::vector<double> grid(kScan + 1), cov(kScan + 1);
  for (int k = 0; k <= kScan; ++k) {
    grid[k] = lo + (hi - lo) * static_cast<double>(k) / kScan;
    cov[k] = k == 0 ? std::numeric_limits<double>::infinity() : cov_at(grid[k]);
  }
  int first = kScan;
  for (int k = 1; k <= kScan; ++k) {
    if (cov[k] <= delta) {
      first = k;
      break;
    }
  }
  for (int k = first + 1; k < kScan; ++k) {
    if (cov[k] > delta) {
      if (warnings) warnings->push_back("weight CoV is not monotone in the relaxation parameter; using the smallest crossing");
      break;
    }
  }
  double a = grid[first - 1], b = grid[first];
  for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, std::fabs(b)); ++it) {
    const double mid = 0.5 * (a + b);
    if (cov_at(mid) <= delta) {
      b = mid;
    } else {
      a = mid;
    }
  }
  return b;
}

double estimate_ratio(std::span<const double> weights) {
  if (weights.empty()) throw DegenerateLevelError("estimate_ratio: no samples");
  const double mean = std::accumulate(weights.begin(), weights.end(), 0.0) / static_cast<double>(weights.size());
  if (!(mean > 0.0)) throw DegenerateLevelError("all importance weights vanished; the relaxation step is too aggressive");
  return mean;
}

double estimate_ratio_log(std::span<const double> log_weights) {
  if (log_weights.empty()) throw DegenerateLevelError("estimate_ratio: no samples");
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  if (!std::isfinite(top)) throw DegenerateLevelError("all importance weights vanished; the relaxation step is too aggressive");
  double sum = 0.0;
  for (double lw : log_weights) sum += std::exp(lw - top);
  return std::exp(top) * sum / static_cast<double>(log_weights.size());
}

double chain_log_product(std::span<const LevelRecord> levels) {
  double total = 0.0;
  for (const auto& level : levels) total += std::log(level.ratio);
  return total;
}

double chain_product(std::span<const LevelRecord> levels) {
  double p = 1.0;
  for (const auto& level : levels) p *= level.ratio;
  if (p > std::numeric_limits<double>::min()) return p;
  return std::exp(chain_log_product(levels));  // subnormal or underflowed product
}

std::vector<std::size_t> systematic_resample(std::span<const double> log_weights, std::size_t count,
                                             RandomStream& rng) {
  if (log_weights.empty() || count == 0) return {};
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  if (!std::isfinite(top)) throw DegenerateLevelError("systematic_resample: all weights vanished");
  std::vector<double> cumulative(log_weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    total += std::exp(log_weights[i] - top);
    cumulative[i] = total;
  }
  std::vector<std::size_t> picks(count);
  const double spacing = total / static_cast<double>(count);
  double u = rng.uniform() * spacing;
  std::size_t i = 0;
  for (std::size_t k = 0; k < count; ++k) {
    while (i + 1 < cumulative.size() && cumulative[i] <= u) ++i;
    picks[k] = i;
    u += spacing;
  }
  return picks;
}

EstimateStats replicate_and_cov(const Runner& runner, std::size_t replications, std::uint64_t seed,
                                std::size_t jobs) {
  if (replications < 2) throw ConfigError("replicate_and_cov needs at least two replications");
  std::vector<RunResult> results(replications);
  parallel_for(replications, jobs, [&](std::size_t r) {
    results[r] = runner(RandomStream(seed, r));
    for (auto& level : results[r].levels) {
      level.samples.clear();
      level.samples.shrink_to_fit();
    }
  });

  EstimateStats stats;
  stats.trace = results.front().levels;
  for (auto& r : results) {
    stats.estimates.push_back(r.pf);
    stats.calls.push_back(r.calls);
    for (auto& w : r.warnings) stats.warnings.push_back(std::move(w));
  }
  const double n = static_cast<double>(replications);
  stats.mean = std::accumulate(stats.estimates.begin(), stats.estimates.end(), 0.0) / n;
  double ss = 0.0;
  for (double e : stats.estimates) ss += (e - stats.mean) * (e - stats.mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  stats.cov = stats.mean != 0.0 ? sd / std::fabs(stats.mean) : 0.0;
  double calls = 0.0;
  for (auto c : stats.calls) calls += static_cast<double>(c);
  stats.mean_calls = calls / n;
  return stats;
}

}  // namespace ris
