#include "ris/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ris/distributions.hpp"
#include "ris/errors.hpp"
#include "ris/parallel.hpp"
#include "ris/special.hpp"

namespace ris {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RandomStream level_stream(const RandomStream& rng, std::size_t level) { return rng.substream(1000 + level); }
RandomStream resample_stream(const RandomStream& rng, std::size_t level) { return rng.substream(2000 + level); }

std::function<double(std::span<const double>)> evaluator(const ReliabilityProblem& problem) {
  return [&problem](std::span<const double> x) { return problem(x); };
}

// log Phi(-g / lambda) with the two limits: lambda = inf gives log 1/2, lambda = 0
// the hard indicator.
double log_smooth_indicator(double g, double lambda) {
  if (lambda == kInf) return std::log(0.5);
  if (lambda == 0.0) return g <= 0.0 ? 0.0 : -kInf;
  return log_normal_cdf(-g / lambda);
}

std::vector<ChainState> pick(const std::vector<ChainState>& pool, std::span<const double> log_weights,
                             std::size_t count, RandomStream rng) {
  const auto idx = systematic_resample(log_weights, count, rng);
  std::vector<ChainState> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(pool[i]);
  return out;
}

std::vector<double> indicator_log_weights(const std::vector<ChainState>& samples, double threshold) {
  std::vector<double> lw(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) lw[i] = samples[i].g <= threshold ? 0.0 : -kInf;
  return lw;
}

double fraction_below(const std::vector<ChainState>& samples, double threshold) {
  std::size_t hits = 0;
  for (const auto& s : samples) hits += s.g <= threshold ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

void push_level(RunResult& result, LevelRecord level, std::vector<ChainState>& samples, bool keep) {
  level.index = result.levels.size();
  if (keep) level.samples = samples;
  result.calls += level.calls;
  result.levels.push_back(std::move(level));
}

void check_level_cap(const RunResult& result, const StrategyConfig& config) {
  if (result.levels.size() >= config.max_levels) {
    throw NonConvergenceError("relaxation did not reach its terminal value within " +
                              std::to_string(config.max_levels) + " levels");
  }
}

void finish(RunResult& result) {
  double log_p = 0.0;
  for (auto& level : result.levels) {
    log_p += std::log(level.ratio);
    level.probability = std::exp(log_p);
  }
  result.pf = chain_product(result.levels);
}

}  // namespace

std::size_t StrategyConfig::seeds_per_level() const {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(level_probability * static_cast<double>(samples_per_level))));
}

void StrategyConfig::validate() const {
  if (samples_per_level == 0) throw ConfigError("samples_per_level must be positive");
  if (!(level_probability > 0.0 && level_probability < 1.0)) throw ConfigError("level_probability must lie in (0, 1)");
  if (!(delta_target > 0.0)) throw ConfigError("delta_target must be positive");
  if (max_levels == 0) throw ConfigError("max_levels must be positive");
  if (!(ais_min_fraction > 0.0 && ais_min_fraction <= 1.0)) throw ConfigError("ais_min_fraction must lie in (0, 1]");
  if (!(ais_max_scale >= 1.0)) throw ConfigError("ais_max_scale must be at least 1");
  if (!(kernel.step_size > 0.0) || kernel.leapfrog_steps == 0) throw ConfigError("invalid HMC kernel settings");
  if (!(kernel.target_accept > 0.0 && kernel.target_accept < 1.0)) throw ConfigError("target_accept must lie in (0, 1)");
  if (!(smooth_step > 0.0 && smooth_step <= 1.0)) throw ConfigError("smooth_step must lie in (0, 1]");
  if (seeds_per_level() > samples_per_level) throw ConfigError("more seeds than samples per level");
}

RandomStream crude_stream(const RandomStream& rng) { return rng.substream(0); }

std::vector<std::pair<double, double>> cdf_points(const RunResult& run) {
  std::vector<std::pair<double, double>> out;
  for (const auto& level : run.levels) out.emplace_back(level.lambda, level.probability);
  return out;
}

std::vector<std::pair<double, double>> fragility_points(const RunResult& run) { return cdf_points(run); }

RunResult subset_simulation(const ReliabilityProblem& problem, const StrategyConfig& config, const RandomStream& rng) {
  config.validate();
  const std::size_t n_samples = config.samples_per_level;
  const std::size_t n_seeds = config.seeds_per_level();
  RunResult result;
  result.kind = ScheduleKind::indicator_threshold;

  std::vector<ChainState> samples =
      draw_crude(n_samples, problem.dimension(), 1.0, evaluator(problem), crude_stream(rng), config.jobs);
  auto g_values = [&] {
    std::vector<double> g(samples.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = samples[i].g;
    return g;
  };
  double lambda = config.initial_relaxation ? std::max(*config.initial_relaxation, 0.0)
                                            : adapt_quantile_lambda(g_values(), config.level_probability, 0.0);
  LevelRecord first;
  first.lambda = lambda;
  first.ratio = fraction_below(samples, lambda);
  first.calls = n_samples;
  if (first.ratio == 0.0) throw InitializationError("no crude sample satisfies the first threshold");
  push_level(result, std::move(first), samples, config.keep_samples);

  KernelConfig kernel = config.kernel;
  while (lambda > 0.0) {
    check_level_cap(result, config);
    const std::size_t j = result.levels.size();
    const auto seeds = pick(samples, indicator_log_weights(samples, lambda), n_seeds, resample_stream(rng, j));
    const IndicatorKernel target{1.0, Constraint{evaluator(problem), lambda}};
    const auto steps = chain_lengths(n_samples, seeds.size());
    ChainRun run = run_chains(seeds, target, steps, kernel, level_stream(rng, j), config.jobs);
    kernel.step_size = run.step_size;
    samples = std::move(run.samples);

    lambda = adapt_quantile_lambda(g_values(), config.level_probability, 0.0);
    LevelRecord level;
    level.lambda = lambda;
    level.ratio = fraction_below(samples, lambda);
    level.calls = run.new_calls;
    level.acceptance = run.acceptance;
    level.step_size = run.step_size;
    push_level(result, std::move(level), samples, config.keep_samples);
  }
  finish(result);
  return result;
}

RunResult sequential_is(const ReliabilityProblem& problem, const StrategyConfig& config, const RandomStream& rng) {
  config.validate();
  const std::size_t n_samples = config.samples_per_level;
  const std::size_t n_seeds = config.seeds_per_level();
  RunResult result;
  result.kind = ScheduleKind::smooth_sigma;

  std::vector<ChainState> samples =
      draw_crude(n_samples, problem.dimension(), 1.0, evaluator(problem), crude_stream(rng), config.jobs);

  auto log_ratio = [&](double next, double current) {
    std::vector<double> lw(samples.size());
    for (std::size_t i = 0; i < lw.size(); ++i) {
      lw[i] = log_smooth_indicator(samples[i].g, next) - log_smooth_indicator(samples[i].g, current);
    }
    return lw;
  };
  auto cov_from = [&](double current) {
    return [&, current](double next) { return weight_cov(log_ratio(next, current)); };
  };

  double lambda;
  if (config.initial_relaxation) {
    lambda = std::max(*config.initial_relaxation, 0.0);
  } else {
    double g_max = 0.0;
    for (const auto& s : samples) g_max = std::max(g_max, std::fabs(s.g));
    lambda = adapt_weight_cov_lambda(cov_from(kInf), 0.0, 10.0 * g_max + 1.0, config.delta_target, &result.warnings);
  }
  std::vector<double> lw(samples.size());
  for (std::size_t i = 0; i < lw.size(); ++i) lw[i] = log_smooth_indicator(samples[i].g, lambda);
  LevelRecord first;
  first.lambda = lambda;
  first.calls = n_samples;
  if (*std::max_element(lw.begin(), lw.end()) == -kInf) {
    throw InitializationError("no crude sample has positive weight at the first smoothing level");
  }
  first.ratio = estimate_ratio_log(lw);
  push_level(result, std::move(first), samples, config.keep_samples);

  KernelConfig kernel = config.kernel;
  kernel.step_size = config.smooth_step;
  while (lambda > 0.0) {
    check_level_cap(result, config);
    const std::size_t j = result.levels.size();
    auto seeds = pick(samples, lw, n_seeds, resample_stream(rng, j));
    for (auto& s : seeds) s.log_weight = log_smooth_indicator(s.g, lambda);
    const double current = lambda;
    const SmoothKernel target{evaluator(problem), [current](double g) { return log_smooth_indicator(g, current); }};
    const auto steps = chain_lengths(n_samples, seeds.size());
    ChainRun run = run_chains(seeds, target, steps, kernel, level_stream(rng, j), config.jobs);
    kernel.step_size = run.step_size;
    samples = std::move(run.samples);

    lambda = adapt_weight_cov_lambda(cov_from(current), 0.0, current, config.delta_target, &result.warnings);
    lw = log_ratio(lambda, current);
    LevelRecord level;
    level.lambda = lambda;
    level.ratio = estimate_ratio_log(lw);
    level.calls = run.new_calls;
    level.acceptance = run.acceptance;
    level.step_size = run.step_size;
    push_level(result, std::move(level), samples, config.keep_samples);
  }
  finish(result);
  return result;
}

RunResult annealed_is(const ReliabilityProblem& problem, const StrategyConfig& config, const RandomStream& rng) {
  config.validate();
  const std::size_t n_samples = config.samples_per_level;
  const std::size_t n_seeds = config.seeds_per_level();
  const std::size_t dim = problem.dimension();
  RunResult result;
  result.kind = ScheduleKind::pdf_scale;

  std::vector<ChainState> unit(n_samples);
  {
    RandomStream stream = crude_stream(rng);
    for (auto& s : unit) {
      s.x.resize(dim);
      fill_normal(s.x, stream);
    }
  }
  std::vector<ChainState> samples(n_samples);
  std::uint64_t crude_calls = 0;
  auto try_scale = [&](double scale) {
    parallel_for(n_samples, config.jobs, [&](std::size_t i) {
      samples[i].x = unit[i].x;
      for (double& v : samples[i].x) v *= scale;
      samples[i].g = problem(samples[i].x);
    });
    crude_calls += n_samples;
    return fraction_below(samples, 0.0);
  };

  double lambda = 0.0;
  double p1 = 0.0;
  if (config.initial_relaxation) {
    lambda = *config.initial_relaxation;
    if (!(lambda >= 1.0)) throw ConfigError("annealed IS: initial scale must be at least 1");
    p1 = try_scale(lambda);
  } else {
    for (double scale = 2.0; scale <= config.ais_max_scale * (1.0 + 1e-12); scale *= 2.0) {
      lambda = scale;
      p1 = try_scale(scale);
      if (p1 >= config.ais_min_fraction) break;
    }
    if (p1 < config.ais_min_fraction) {
      throw InitializationError("annealed IS: no initial scale up to " + std::to_string(config.ais_max_scale) +
                                " reached the required failure fraction");
    }
  }
  if (p1 == 0.0) throw InitializationError("annealed IS: no crude sample fails at the initial scale");
  LevelRecord first;
  first.lambda = lambda;
  first.ratio = p1;
  first.calls = crude_calls;
  push_level(result, std::move(first), samples, config.keep_samples);

  std::vector<double> lw = indicator_log_weights(samples, 0.0);
  KernelConfig kernel = config.kernel;
  while (lambda > 1.0) {
    check_level_cap(result, config);
    const std::size_t j = result.levels.size();
    const auto seeds = pick(samples, lw, n_seeds, resample_stream(rng, j));
    const IndicatorKernel target{lambda, Constraint{evaluator(problem), 0.0}};
    const auto steps = chain_lengths(n_samples, seeds.size());
    ChainRun run = run_chains(seeds, target, steps, kernel, level_stream(rng, j), config.jobs);
    kernel.step_size = run.step_size;
    samples = std::move(run.samples);

    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = squared_norm(samples[i].x);
    const double current = lambda;
    auto log_ratio = [&](double next) {
      std::vector<double> out(sq.size());
      for (std::size_t i = 0; i < sq.size(); ++i) out[i] = scaled_gaussian_log_ratio(sq[i], dim, next, current);
      return out;
    };
    lambda = adapt_weight_cov_lambda([&](double next) { return weight_cov(log_ratio(next)); }, 1.0, current,
                                     config.delta_target, &result.warnings);
    lw = log_ratio(lambda);
    LevelRecord level;
    level.lambda = lambda;
    level.ratio = estimate_ratio_log(lw);
    level.calls = run.new_calls;
    level.acceptance = run.acceptance;
    level.step_size = run.step_size;
    push_level(result, std::move(level), samples, config.keep_samples);
  }
  finish(result);
  return result;
}

}  // namespace ris
