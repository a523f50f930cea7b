#include "ris/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "ris/distributions.hpp"
#include "ris/errors.hpp"
#include "ris/parallel.hpp"
#include "ris/strategies.hpp"

namespace ris {
namespace {

using Value = std::function<double(std::span<const double>)>;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kThetaFloor = 1e-300;

RandomStream phase_stream(const RandomStream& rng, std::size_t step) { return rng.substream(1000 + step); }
RandomStream phase_resample(const RandomStream& rng, std::size_t step) { return rng.substream(2000 + step); }
RandomStream sweep_stream(const RandomStream& rng, std::size_t row, std::size_t step) {
  return rng.substream(3000 + row).substream(2 * step);
}
RandomStream sweep_resample(const RandomStream& rng, std::size_t row, std::size_t step) {
  return rng.substream(3000 + row).substream(2 * step + 1);
}

double fraction_below(const std::vector<ChainState>& samples, double threshold) {
  std::size_t hits = 0;
  for (const auto& s : samples) hits += s.g <= threshold ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(samples.size());
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

// G(xi x); the unscaled path avoids the copy and keeps xi = 1 bit-identical to G.
Value scaled_value(const ReliabilityProblem& problem, double xi) {
  return [&problem, xi](std::span<const double> x) {
    if (xi == 1.0) return problem(x);
    std::vector<double> y(x.begin(), x.end());
    for (double& v : y) v *= xi;
    return problem(y);
  };
}

bool close_to(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)}); }

class Builder {
 public:
  Builder(const ReliabilityProblem& problem, const SurfaceAxes& axes, const SurfaceConfig& config,
          const RandomStream& rng, SurfaceMethod method)
      : problem_(problem), config_(config), rng_(rng) {
    axes.validate();
    config.validate();
    grid_.method = method;
    grid_.axes = axes;
    grid_.dimension = problem.dimension();
    grid_.samples_per_level = config.samples_for(method);
    const std::size_t nodes = axes.rows() * axes.columns();
    grid_.probability.assign(nodes, std::numeric_limits<double>::quiet_NaN());
    if (method == SurfaceMethod::is_one) grid_.node_samples.resize(nodes);
    n_ = grid_.samples_per_level;
    seeds_ = config.seeds_for(method);
  }

  SurfaceGrid run() {
    if (grid_.method == SurfaceMethod::is_one) {
      phase_one_scale();
    } else {
      phase_one_spherical();
      fit_rows();
    }
    return std::move(grid_);
  }

 private:
  std::size_t rows() const { return grid_.axes.rows(); }
  std::size_t columns() const { return grid_.axes.columns(); }
  double& node(std::size_t i, std::size_t j) { return grid_.probability[i * columns() + j]; }

  void record(double eps, double xi, double lambda, double ratio, double probability, const ChainRun* run) {
    LevelRecord level;
    level.index = grid_.route.size();
    level.lambda = lambda;
    level.epsilon = eps;
    level.xi = xi;
    level.ratio = ratio;
    level.probability = probability;
    level.calls = pending_;
    if (run) {
      level.acceptance = run->acceptance;
      level.step_size = run->step_size;
    }
    grid_.calls += pending_;
    pending_ = 0;
    grid_.route.push_back(std::move(level));
  }

  ChainRun chains(const std::vector<ChainState>& seeds, const Kernel& kernel, KernelConfig& kc,
                  const RandomStream& stream) {
    const auto steps = chain_lengths(n_, seeds.size());
    ChainRun run = run_chains(seeds, kernel, steps, kc, stream, config_.jobs);
    kc.step_size = run.step_size;
    pending_ += run.new_calls;
    return run;
  }

  Value row_value(std::size_t j) const {
    const double xi = grid_.axes.xi[j];
    if (grid_.method == SurfaceMethod::is_one) return [this](std::span<const double> x) { return problem_(x); };
    return scaled_value(problem_, xi);
  }

  double kernel_scale(std::size_t j) const { return grid_.method == SurfaceMethod::is_one ? grid_.axes.xi[j] : 1.0; }

  // Quantile steps along epsilon from node (0, j), forced onto every grid epsilon.
  void sweep_row(std::size_t j, std::vector<ChainState> samples, KernelConfig kc, const ChainRun* first_run) {
    const auto& eps_axis = grid_.axes.epsilon;
    const double xi = grid_.axes.xi[j];
    const Value value = row_value(j);
    double p = node(0, j);
    std::size_t i = 0;
    const ChainRun* last_run = first_run;
    ChainRun run;
    for (std::size_t step = 0;; ++step) {
      if (step >= config_.max_steps) {
        throw NonConvergenceError("epsilon sweep did not reach the last grid threshold within " +
                                  std::to_string(config_.max_steps) + " steps");
      }
      std::vector<double> g(samples.size());
      for (std::size_t k = 0; k < g.size(); ++k) g[k] = samples[k].g;
      const double eps = adapt_quantile_lambda(g, config_.level_probability, eps_axis[i + 1]);
      const double ratio = fraction_below(samples, eps);
      p *= ratio;
      record(eps, xi, eps, ratio, p, last_run);
      const bool on_node = eps == eps_axis[i + 1];
      if (on_node) node(++i, j) = p;
      if (i + 1 == rows()) return;

      const auto seeds = pick(samples, indicator_log_weights(samples, eps), seeds_, sweep_resample(rng_, j, step));
      run = chains(seeds, IndicatorKernel{kernel_scale(j), Constraint{value, eps}}, kc, sweep_stream(rng_, j, step));
      samples = std::move(run.samples);
      last_run = &run;
      if (on_node && grid_.method == SurfaceMethod::is_one) grid_.node_samples[i * columns() + j] = samples;
    }
  }

  void phase_one_scale() {
    const auto& axes = grid_.axes;
    if (problem_.dimension() > config_.dimension_cap) {
      throw ConfigError("IS-I refused: dimension " + std::to_string(problem_.dimension()) + " exceeds the cap of " +
                        std::to_string(config_.dimension_cap) +
                        "; Gaussian scale weights degenerate exponentially with dimension, use IS-II");
    }
    const double eps0 = axes.epsilon[0];
    const std::size_t dim = problem_.dimension();
    const Value value = [this](std::span<const double> x) { return problem_(x); };

    std::vector<ChainState> samples = draw_crude(n_, dim, axes.xi[0], value, crude_stream(rng_), config_.jobs);
    pending_ += n_;
    double p = fraction_below(samples, eps0);
    if (p == 0.0) throw InitializationError("IS-I: no crude sample reached the most relaxed grid corner");
    node(0, 0) = p;
    record(eps0, axes.xi[0], axes.xi[0], p, p, nullptr);

    std::vector<double> lw = indicator_log_weights(samples, eps0);
    KernelConfig kc = config_.kernel;
    double xi = axes.xi[0];
    std::size_t j = 0;
    bool on_node = true;
    for (std::size_t step = 0;; ++step) {
      const bool last = j + 1 == columns();
      if (last && rows() == 1) return;
      if (step >= config_.max_steps) {
        throw NonConvergenceError("IS-I scale phase did not reach xi = 1 within " + std::to_string(config_.max_steps) +
                                  " steps");
      }
      const auto seeds = pick(samples, lw, seeds_, phase_resample(rng_, step));
      ChainRun run = chains(seeds, IndicatorKernel{xi, Constraint{value, eps0}}, kc, phase_stream(rng_, step));
      samples = std::move(run.samples);
      if (on_node) {
        grid_.node_samples[j] = samples;
        if (rows() > 1) sweep_row(j, samples, kc, &run);
      }
      if (last) return;

      std::vector<double> sq(samples.size());
      for (std::size_t k = 0; k < sq.size(); ++k) sq[k] = squared_norm(samples[k].x);
      const double current = xi;
      auto log_ratio = [&](double next) {
        std::vector<double> out(sq.size());
        for (std::size_t k = 0; k < sq.size(); ++k) out[k] = scaled_gaussian_log_ratio(sq[k], dim, next, current);
        return out;
      };
      const double target = axes.xi[j + 1];
      xi = adapt_weight_cov_lambda([&](double next) { return weight_cov(log_ratio(next)); }, target, current,
                                   config_.delta_target, &grid_.warnings);
      lw = log_ratio(xi);
      const double ratio = estimate_ratio_log(lw);
      p = std::min(1.0, p * ratio);  // weight noise can push a near-certain level past one
      record(eps0, xi, xi, ratio, p, &run);
      on_node = xi == target;
      if (on_node) node(0, ++j) = p;
    }
  }

  double predict_xi(double xi, double last_ratio) {
    const double radius = grid_.reference_radius();
    const double fallback = std::max(1.0, config_.fallback_factor * xi);
    try {
      FitOptions options;
      options.clamp = 0.5 / static_cast<double>(n_);
      const auto curve = FailureRatioCurve::fit(phase_points_, grid_.dimension, options);
      const double next = extrapolate_xi([&curve](double r) { return curve(r); }, xi, config_.rho, radius);
      // in low dimension the cap model under-steps near xi R = b; the last realized ratio exposes that
      if (std::isfinite(next) && next < xi) return last_ratio > std::sqrt(config_.rho) ? std::min(next, fallback) : next;
    } catch (const NumericalError&) {
    } catch (const ContractViolation&) {
    }
    grid_.warnings.push_back("IS-II: failure-ratio model unusable at xi = " + std::to_string(xi) +
                             ", stepping to " + std::to_string(fallback));
    return fallback;
  }

  void phase_one_spherical() {
    const auto& axes = grid_.axes;
    const double eps0 = axes.epsilon[0];
    const double radius = grid_.reference_radius();

    std::vector<ChainState> samples =
        draw_crude(n_, grid_.dimension, 1.0, scaled_value(problem_, axes.xi[0]), crude_stream(rng_), config_.jobs);
    pending_ += n_;
    double p = fraction_below(samples, eps0);
    if (p == 0.0) throw InitializationError("IS-II: no crude sample reached the most relaxed grid corner");
    node(0, 0) = p;
    record(eps0, axes.xi[0], axes.xi[0], p, p, nullptr);
    phase_points_.push_back({axes.xi[0] * radius, p});

    std::vector<ChainState> seeds;
    for (const auto& s : samples)
      if (s.g <= eps0) seeds.push_back(s);

    KernelConfig kc = config_.kernel;
    double xi = axes.xi[0];
    double last_ratio = 0.0;
    std::size_t j = 0;
    bool on_node = true;
    for (std::size_t step = 0;; ++step) {
      const bool last = j + 1 == columns();
      if (last && rows() == 1) return;
      if (step >= config_.max_steps) {
        throw NonConvergenceError("IS-II scale phase did not reach xi = 1 within " +
                                  std::to_string(config_.max_steps) + " steps");
      }
      ChainRun run =
          chains(seeds, IndicatorKernel{1.0, Constraint{scaled_value(problem_, xi), eps0}}, kc, phase_stream(rng_, step));
      samples = std::move(run.samples);
      if (on_node && rows() > 1) sweep_row(j, samples, kc, &run);
      if (last) return;

      const double target = axes.xi[j + 1];
      double next = std::max(target, predict_xi(xi, last_ratio));
      std::vector<double> g(samples.size());
      std::size_t hits = 0;
      for (std::size_t attempt = 0;; ++attempt) {
        const Value value = scaled_value(problem_, next);
        parallel_for(samples.size(), config_.jobs, [&](std::size_t k) { g[k] = value(samples[k].x); });
        pending_ += samples.size();
        hits = 0;
        for (double v : g) hits += v <= eps0 ? 1 : 0;
        if (hits > 0) break;
        if (attempt >= config_.max_backoff) {
          throw DegenerateLevelError("IS-II: no sample survived the xi step after " +
                                     std::to_string(config_.max_backoff) + " back-offs");
        }
        grid_.warnings.push_back("IS-II: no sample fails at xi = " + std::to_string(next) + ", backing off");
        next = 0.5 * (next + xi);
      }
      const double ratio = static_cast<double>(hits) / static_cast<double>(samples.size());
      last_ratio = ratio;
      p *= ratio;
      record(eps0, next, next, ratio, p, &run);
      phase_points_.push_back({next * radius, p});

      seeds.clear();
      for (std::size_t k = 0; k < samples.size(); ++k) {
        if (g[k] <= eps0) {
          seeds.push_back(samples[k]);
          seeds.back().g = g[k];
        }
      }
      xi = next;
      on_node = xi == target;
      if (on_node) node(0, ++j) = p;
    }
  }

  void fit_rows() {
    const double radius = grid_.reference_radius();
    FitOptions options;
    options.clamp = 0.5 / static_cast<double>(n_);
    grid_.row_points.assign(rows(), {});
    grid_.row_curves.assign(rows(), FailureRatioCurve{});
    grid_.row_fitted.assign(rows(), false);
    for (std::size_t i = 0; i < rows(); ++i) {
      auto& points = grid_.row_points[i];
      if (i == 0) {
        points = phase_points_;
      } else {
        for (std::size_t j = 0; j < columns(); ++j) points.push_back({grid_.axes.xi[j] * radius, node(i, j)});
      }
      try {
        grid_.row_curves[i] = FailureRatioCurve::fit(points, grid_.dimension, options);
        grid_.row_fitted[i] = true;
      } catch (const NumericalError& e) {
        grid_.warnings.push_back("IS-II: row " + std::to_string(i) + " ratio fit failed (" + e.what() +
                                 "); queries interpolate the row nodes");
      }
    }
  }

  const ReliabilityProblem& problem_;
  const SurfaceConfig& config_;
  RandomStream rng_;
  SurfaceGrid grid_;
  std::size_t n_ = 0;
  std::size_t seeds_ = 0;
  std::uint64_t pending_ = 0;
  std::vector<RatioPoint> phase_points_;
};

void check_cell(const SurfaceAxes& axes, std::size_t i, std::size_t j, double eps, double xi) {
  if (i >= axes.rows() || j >= axes.columns()) throw RangeError("surface query: cell index out of range");
  const double eps_hi = axes.epsilon[i], eps_lo = i + 1 < axes.rows() ? axes.epsilon[i + 1] : eps_hi;
  const double xi_hi = axes.xi[j], xi_lo = j + 1 < axes.columns() ? axes.xi[j + 1] : xi_hi;
  const bool eps_in = (eps <= eps_hi && eps >= eps_lo) || close_to(eps, eps_hi) || close_to(eps, eps_lo);
  const bool xi_in = (xi <= xi_hi && xi >= xi_lo) || close_to(xi, xi_hi) || close_to(xi, xi_lo);
  if (!eps_in || !xi_in) {
    throw RangeError("surface query (eps = " + std::to_string(eps) + ", xi = " + std::to_string(xi) +
                     ") lies outside cell (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  }
}

// Stored node value when (eps, xi) is a grid node.
std::optional<double> node_value(const SurfaceGrid& grid, double eps, double xi) {
  const auto& ea = grid.axes.epsilon;
  const auto& xa = grid.axes.xi;
  for (std::size_t i = 0; i < ea.size(); ++i) {
    if (!close_to(ea[i], eps)) continue;
    for (std::size_t j = 0; j < xa.size(); ++j)
      if (close_to(xa[j], xi)) return grid.at(i, j);
  }
  return std::nullopt;
}

// Row failure ratio at radius r: fitted curve, or log-linear interpolation of
// the row nodes in log r when the fit failed.
double row_theta(const SurfaceGrid& grid, std::size_t i, double r) {
  if (grid.row_fitted.at(i)) return grid.row_curves[i](r);
  std::vector<RatioPoint> pts = grid.row_points.at(i);
  std::sort(pts.begin(), pts.end(), [](const RatioPoint& a, const RatioPoint& b) { return a.radius < b.radius; });
  if (r <= pts.front().radius) return pts.front().ratio;
  if (r >= pts.back().radius) return pts.back().ratio;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    if (r > pts[k].radius) continue;
    const double t = std::log(r / pts[k - 1].radius) / std::log(pts[k].radius / pts[k - 1].radius);
    const double a = std::max(pts[k - 1].ratio, kThetaFloor), b = std::max(pts[k].ratio, kThetaFloor);
    return std::exp((1.0 - t) * std::log(a) + t * std::log(b));
  }
  return pts.back().ratio;
}

}  // namespace

const char* to_string(SurfaceMethod method) noexcept {
  return method == SurfaceMethod::is_one ? "is1" : "is2";
}

SurfaceAxes SurfaceAxes::uniform(double eps_max, std::size_t eps_count, double xi_max, std::size_t xi_count) {
  if (eps_count == 0 || xi_count == 0) throw ConfigError("surface axes need at least one value each");
  SurfaceAxes axes;
  for (std::size_t i = 0; i < eps_count; ++i) {
    const double t = eps_count == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(eps_count - 1);
    axes.epsilon.push_back(i + 1 == eps_count ? 0.0 : eps_max * (1.0 - t));
  }
  for (std::size_t j = 0; j < xi_count; ++j) {
    const double t = xi_count == 1 ? 1.0 : static_cast<double>(j) / static_cast<double>(xi_count - 1);
    axes.xi.push_back(j + 1 == xi_count ? 1.0 : xi_max + (1.0 - xi_max) * t);
  }
  axes.validate();
  return axes;
}

void SurfaceAxes::validate() const {
  if (epsilon.empty() || xi.empty()) throw ConfigError("surface axes need at least one value each");
  if (epsilon.back() != 0.0) throw ConfigError("the epsilon axis must end at 0");
  if (xi.back() != 1.0) throw ConfigError("the xi axis must end at 1");
  for (std::size_t i = 1; i < epsilon.size(); ++i)
    if (!(epsilon[i] < epsilon[i - 1])) throw ConfigError("the epsilon axis must be strictly decreasing");
  for (std::size_t j = 1; j < xi.size(); ++j)
    if (!(xi[j] < xi[j - 1])) throw ConfigError("the xi axis must be strictly decreasing");
}

std::size_t SurfaceConfig::samples_for(SurfaceMethod method) const noexcept {
  if (samples_per_level > 0) return samples_per_level;
  return method == SurfaceMethod::is_one ? 100 : 1000;
}

std::size_t SurfaceConfig::seeds_for(SurfaceMethod method) const noexcept {
  const double n = static_cast<double>(samples_for(method));
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(level_probability * n)));
}

void SurfaceConfig::validate() const {
  if (!(level_probability > 0.0 && level_probability < 1.0)) throw ConfigError("level_probability must lie in (0, 1)");
  if (!(delta_target > 0.0)) throw ConfigError("delta_target must be positive");
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("rho must lie in (0, 1)");
  if (max_steps == 0) throw ConfigError("max_steps must be positive");
  if (!(fallback_factor > 0.0 && fallback_factor < 1.0)) throw ConfigError("fallback_factor must lie in (0, 1)");
  if (!(kernel.step_size > 0.0) || kernel.leapfrog_steps == 0) throw ConfigError("invalid HMC kernel settings");
  if (!(kernel.target_accept > 0.0 && kernel.target_accept < 1.0)) throw ConfigError("target_accept must lie in (0, 1)");
  for (auto m : {SurfaceMethod::is_one, SurfaceMethod::is_two}) {
    if (seeds_for(m) > samples_for(m)) throw ConfigError("more seeds than samples per level");
  }
}

bool SurfaceGrid::complete() const {
  if (probability.size() != axes.rows() * axes.columns()) return false;
  return std::all_of(probability.begin(), probability.end(), [](double p) { return std::isfinite(p); });
}

double SurfaceGrid::reference_radius() const { return std::sqrt(static_cast<double>(dimension)); }

SurfaceGrid is_one(const ReliabilityProblem& problem, const SurfaceAxes& axes, const SurfaceConfig& config,
                   const RandomStream& rng) {
  return Builder(problem, axes, config, rng, SurfaceMethod::is_one).run();
}

SurfaceGrid is_two(const ReliabilityProblem& problem, const SurfaceAxes& axes, const SurfaceConfig& config,
                   const RandomStream& rng) {
  return Builder(problem, axes, config, rng, SurfaceMethod::is_two).run();
}

std::pair<std::size_t, std::size_t> locate_cell(const SurfaceAxes& axes, double eps, double xi) {
  const auto& ea = axes.epsilon;
  const auto& xa = axes.xi;
  const bool eps_in = (eps <= ea.front() || close_to(eps, ea.front())) && (eps >= ea.back() || close_to(eps, ea.back()));
  const bool xi_in = (xi <= xa.front() || close_to(xi, xa.front())) && (xi >= xa.back() || close_to(xi, xa.back()));
  if (!eps_in || !xi_in) {
    throw RangeError("surface query (eps = " + std::to_string(eps) + ", xi = " + std::to_string(xi) +
                     ") lies outside the grid");
  }
  std::size_t i = 0, j = 0;
  for (std::size_t k = 0; k < ea.size(); ++k)
    if (ea[k] >= eps || close_to(ea[k], eps)) i = k;
  for (std::size_t k = 0; k < xa.size(); ++k)
    if (xa[k] >= xi || close_to(xa[k], xi)) j = k;
  if (ea.size() > 1) i = std::min(i, ea.size() - 2);
  if (xa.size() > 1) j = std::min(j, xa.size() - 2);
  return {i, j};
}

double is_one_query(const SurfaceGrid& grid, std::size_t i, std::size_t j, double eps, double xi) {
  if (grid.method != SurfaceMethod::is_one) throw ContractViolation("is_one_query on a grid built by IS-II");
  check_cell(grid.axes, i, j, eps, xi);
  const auto& samples = grid.node_samples.at(i * grid.axes.columns() + j);
  if (samples.empty()) {
    if (close_to(eps, grid.axes.epsilon[i]) && close_to(xi, grid.axes.xi[j])) return grid.at(i, j);
    throw RangeError("surface query: node (" + std::to_string(i) + ", " + std::to_string(j) + ") holds no samples");
  }
  const double xi_node = grid.axes.xi[j];
  std::vector<double> lw(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    lw[k] = samples[k].g <= eps ? scaled_gaussian_log_ratio(squared_norm(samples[k].x), grid.dimension, xi, xi_node)
                                : -kInf;
  }
  const double top = *std::max_element(lw.begin(), lw.end());
  if (top == -kInf) return 0.0;
  double sum = 0.0;
  for (double v : lw) sum += std::exp(v - top);
  const double log_mean = top + std::log(sum / static_cast<double>(samples.size()));
  return std::clamp(grid.at(i, j) * std::exp(log_mean), 0.0, 1.0);
}

double is_one_query(const SurfaceGrid& grid, double eps, double xi) {
  if (auto v = node_value(grid, eps, xi)) return *v;
  const auto [i, j] = locate_cell(grid.axes, eps, xi);
  return is_one_query(grid, i, j, eps, xi);
}

double is_two_query(const SurfaceGrid& grid, std::size_t i, std::size_t j, double eps, double xi) {
  if (grid.method != SurfaceMethod::is_two) throw ContractViolation("is_two_query on a grid built by IS-I");
  check_cell(grid.axes, i, j, eps, xi);
  const auto& ea = grid.axes.epsilon;
  const double radius = grid.reference_radius();
  auto theta = [&](double r) {
    if (i + 1 >= ea.size() || close_to(eps, ea[i])) return row_theta(grid, i, r);
    const double t = std::clamp((ea[i] - eps) / (ea[i] - ea[i + 1]), 0.0, 1.0);
    if (t == 1.0) return row_theta(grid, i + 1, r);
    const double a = row_theta(grid, i, r), b = row_theta(grid, i + 1, r);
    if (a <= 0.0 || b <= 0.0) return 0.0;
    return std::exp((1.0 - t) * std::log(a) + t * std::log(b));
  };
  const double denominator = std::max(row_theta(grid, i, grid.axes.xi[j] * radius), kThetaFloor);
  return std::clamp(grid.at(i, j) * theta(xi * radius) / denominator, 0.0, 1.0);
}

double is_two_query(const SurfaceGrid& grid, double eps, double xi) {
  if (auto v = node_value(grid, eps, xi)) return *v;
  const auto [i, j] = locate_cell(grid.axes, eps, xi);
  return is_two_query(grid, i, j, eps, xi);
}

double query_surface(const SurfaceGrid& grid, double eps, double xi) {
  return grid.method == SurfaceMethod::is_one ? is_one_query(grid, eps, xi) : is_two_query(grid, eps, xi);
}

RunResult surface_run_result(const SurfaceGrid& grid) {
  RunResult result;
  result.kind = grid.method == SurfaceMethod::is_one ? ScheduleKind::coupled_eps_xi : ScheduleKind::spherical_eps_xi;
  result.pf = grid.probability.back();
  result.levels = grid.route;
  result.calls = grid.calls;
  result.warnings = grid.warnings;
  return result;
}

}  // namespace ris
