#include "ris/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ris/distributions.hpp"
#include "ris/errors.hpp"
#include "ris/parallel.hpp"

namespace ris {
namespace {

// Nesterov dual averaging on log step size (Hoffman & Gelman constants).
class DualAveraging {
 public:
  DualAveraging(double initial, double target, double cap)
      : mu_(std::log(10.0 * initial)), target_(target), log_cap_(std::log(cap)), log_step_(std::log(initial)),
        log_avg_(std::log(initial)) {}

  void update(double acceptance) {
    ++t_;
    const double eta = 1.0 / (static_cast<double>(t_) + kT0);
    h_bar_ = (1.0 - eta) * h_bar_ + eta * (target_ - acceptance);
    log_step_ = std::min(mu_ - std::sqrt(static_cast<double>(t_)) / kGamma * h_bar_, log_cap_);
    log_step_ = std::max(log_step_, kLogFloor);
    const double w = std::pow(static_cast<double>(t_), -kKappa);
    log_avg_ = w * log_step_ + (1.0 - w) * log_avg_;
  }

  double current() const { return std::exp(log_step_); }
  double frozen() const { return std::exp(std::min(log_avg_, log_cap_)); }

 private:
  static constexpr double kGamma = 0.05;
  static constexpr double kT0 = 10.0;
  static constexpr double kKappa = 0.75;
  static constexpr double kLogFloor = -9.0;
  double mu_, target_, log_cap_, log_step_, log_avg_;
  double h_bar_ = 0.0;
  std::size_t t_ = 0;
};

}  // namespace

double max_leapfrog_step(std::size_t leapfrog_steps) noexcept {
  // leapfrog rotates by arccos(1 - h^2/2) per step on a unit oscillator
  const double per_step = 0.98 * std::numbers::pi / static_cast<double>(std::max<std::size_t>(leapfrog_steps, 1));
  return std::min(2.0 * std::sin(0.5 * per_step), 1.95);
}

StepOutcome hmc_indicator_step(ChainState& state, double xi, const Constraint& constraint, double step_size,
                               std::size_t leapfrog_steps, RandomStream& rng) {
  if (!(xi > 0.0)) throw DomainError("hmc_indicator_step: xi must be positive");
  if (!(step_size > 0.0) || leapfrog_steps == 0) throw DomainError("hmc_indicator_step: bad trajectory settings");
  if (!constraint.satisfied(state.g)) throw ContractViolation("hmc_indicator_step: current state violates constraint");

  const std::size_t n = state.x.size();
  std::vector<double> y(n), p(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = state.x[i] / xi;
  fill_normal(p, rng);
  const double h0 = 0.5 * (squared_norm(y) + squared_norm(p));

  const double h = step_size;
  for (std::size_t i = 0; i < n; ++i) p[i] -= 0.5 * h * y[i];
  for (std::size_t l = 0; l < leapfrog_steps; ++l) {
    for (std::size_t i = 0; i < n; ++i) y[i] += h * p[i];
    const double kick = (l + 1 == leapfrog_steps) ? 0.5 * h : h;
    for (std::size_t i = 0; i < n; ++i) p[i] -= kick * y[i];
  }
  const double h1 = 0.5 * (squared_norm(y) + squared_norm(p));

  StepOutcome outcome;
  if (!(std::log(rng.uniform()) < h0 - h1)) return outcome;

  for (double& v : y) v *= xi;
  const double value = constraint.value(y);
  outcome.evaluated = true;
  if (!constraint.satisfied(value)) return outcome;
  state.x = std::move(y);
  state.g = value;
  outcome.accepted = true;
  return outcome;
}

StepOutcome mwg_smooth_step(ChainState& state, const SmoothKernel& target, double sigma, RandomStream& rng) {
  if (!(sigma > 0.0 && sigma <= 1.0)) throw DomainError("mwg_smooth_step: sigma must lie in (0, 1]");
  const double rho = std::sqrt(std::max(0.0, 1.0 - sigma * sigma));
  std::vector<double> proposal(state.x.size());
  fill_normal(proposal, rng);
  for (std::size_t i = 0; i < proposal.size(); ++i) proposal[i] = rho * state.x[i] + sigma * proposal[i];
  const double value = target.value(proposal);
  const double log_weight = target.log_weight(value);

  StepOutcome outcome;
  outcome.evaluated = true;
  const double log_u = std::log(rng.uniform());
  if (!(log_u < log_weight - state.log_weight)) return outcome;
  state.x = std::move(proposal);
  state.g = value;
  state.log_weight = log_weight;
  outcome.accepted = true;
  return outcome;
}

std::vector<std::size_t> chain_lengths(std::size_t samples, std::size_t chains) {
  if (chains == 0) throw ConfigError("chain_lengths: no chains");
  if (samples < chains) throw ConfigError("chain_lengths: fewer samples than chains");
  std::vector<std::size_t> steps(chains);
  for (std::size_t c = 0; c < chains; ++c) {
    const std::size_t total = samples * (c + 1) / chains - samples * c / chains;
    steps[c] = total - 1;
  }
  return steps;
}

ChainRun run_chains(std::span<const ChainState> seeds, const Kernel& kernel, std::span<const std::size_t> steps,
                    const KernelConfig& config, const RandomStream& rng, std::size_t jobs) {
  if (seeds.empty()) throw ConfigError("run_chains: empty seed set");
  if (steps.size() != seeds.size()) throw ConfigError("run_chains: one step count per seed required");
  if (!(config.target_accept > 0.0 && config.target_accept < 1.0))
    throw ConfigError("run_chains: target_accept must lie in (0, 1)");

  const bool smooth = std::holds_alternative<SmoothKernel>(kernel);
  const double cap = smooth ? 1.0 : max_leapfrog_step(config.leapfrog_steps);
  double step = std::clamp(config.step_size, 1e-4, cap);
  DualAveraging adapt(step, config.target_accept, cap);

  const std::size_t chains = seeds.size();
  std::vector<std::vector<ChainState>> traces(chains);
  std::vector<RandomStream> streams;
  streams.reserve(chains);
  for (std::size_t c = 0; c < chains; ++c) {
    traces[c].reserve(steps[c] + 1);
    traces[c].push_back(seeds[c]);
    streams.push_back(rng.substream(c));
  }
  const std::size_t sweeps = *std::max_element(steps.begin(), steps.end());

  std::vector<StepOutcome> outcomes(chains);
  std::uint64_t calls = 0;
  std::size_t post_moves = 0, post_accepts = 0, all_moves = 0, all_accepts = 0;
  for (std::size_t s = 0; s < sweeps; ++s) {
    const double jitter_lo = config.jitter && !smooth ? 0.8 : 1.0;
    const double jitter_hi = config.jitter && !smooth ? 1.2 : 1.0;
    parallel_for(chains, jobs, [&](std::size_t c) {
      outcomes[c] = StepOutcome{};
      if (s >= steps[c]) return;
      ChainState next = traces[c].back();
      RandomStream& r = streams[c];
      if (smooth) {
        outcomes[c] = mwg_smooth_step(next, std::get<SmoothKernel>(kernel), step, r);
      } else {
        const auto& k = std::get<IndicatorKernel>(kernel);
        const double u = r.uniform();
        const double h = std::min(step * (jitter_lo + (jitter_hi - jitter_lo) * u), cap);
        outcomes[c] = hmc_indicator_step(next, k.xi, k.constraint, h, config.leapfrog_steps, r);
      }
      traces[c].push_back(std::move(next));
    });
    std::size_t moves = 0, accepts = 0;
    for (std::size_t c = 0; c < chains; ++c) {
      if (s >= steps[c]) continue;
      ++moves;
      accepts += outcomes[c].accepted ? 1 : 0;
      calls += outcomes[c].evaluated ? 1 : 0;
    }
    all_moves += moves;
    all_accepts += accepts;
    if (s < config.burn_in) {
      adapt.update(static_cast<double>(accepts) / static_cast<double>(moves));
      step = (s + 1 == config.burn_in) ? adapt.frozen() : adapt.current();
    } else {
      post_moves += moves;
      post_accepts += accepts;
    }
  }
  if (sweeps > 0 && sweeps <= config.burn_in) step = adapt.frozen();

  ChainRun run;
  run.new_calls = calls;
  run.step_size = step;
  if (post_moves > 0) {
    run.acceptance = static_cast<double>(post_accepts) / static_cast<double>(post_moves);
  } else if (all_moves > 0) {
    run.acceptance = static_cast<double>(all_accepts) / static_cast<double>(all_moves);
  }
  std::size_t total = 0;
  for (const auto& t : traces) total += t.size();
  run.samples.reserve(total);
  run.chain_of.reserve(total);
  for (std::size_t c = 0; c < chains; ++c) {
    for (auto& st : traces[c]) {
      run.samples.push_back(std::move(st));
      run.chain_of.push_back(c);
    }
  }
  return run;
}

}  // namespace ris
