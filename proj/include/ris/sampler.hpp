#ifndef RIS_SAMPLER_HPP
#define RIS_SAMPLER_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "ris/random.hpp"

namespace ris {

struct ChainState {
  std::vector<double> x;
  double g = 0.0;           // cached constraint / limit-state value at x
  double log_weight = 0.0;  // cached smooth log-weight at g (unused by indicator kernels)
};

struct KernelConfig {
  double step_size = 0.2;
  std::size_t leapfrog_steps = 10;
  double target_accept = 0.6;
  std::size_t burn_in = 10;
  bool jitter = true;
};

/// value(x) <= threshold.
struct Constraint {
  std::function<double(std::span<const double>)> value;
  double threshold = 0.0;

  bool satisfied(double v) const noexcept { return v <= threshold; }
};

/// Target proportional to N(x; 0, xi^2 I) restricted to the constraint.
struct IndicatorKernel {
  double xi = 1.0;
  Constraint constraint;
};

/// Target proportional to exp(log_weight(value(x))) N(x; 0, I).
struct SmoothKernel {
  std::function<double(std::span<const double>)> value;
  std::function<double(double)> log_weight;
};

using Kernel = std::variant<IndicatorKernel, SmoothKernel>;

/// Largest leapfrog step keeping an L-step trajectory under half a period of
/// the unit harmonic oscillator.
double max_leapfrog_step(std::size_t leapfrog_steps) noexcept;

struct StepOutcome {
  bool accepted = false;
  bool evaluated = false;  // whether the limit state was called
};

/**
 * One Metropolis-corrected leapfrog trajectory for the potential
 * ||x||^2 / (2 xi^2), run in y = x / xi. The energy test is applied first; the
 * constraint is only evaluated for a proposal that passes it, and a violating
 * endpoint is rejected. Throws ContractViolation if `state` violates the
 * constraint.
 */
StepOutcome hmc_indicator_step(ChainState& state, double xi, const Constraint& constraint, double step_size,
                               std::size_t leapfrog_steps, RandomStream& rng);

/**
 * Preconditioned Crank-Nicolson step x' = rho x + sigma z with
 * rho = sqrt(1 - sigma^2), accepted with probability
 * min(1, exp(w(x') - w(x))), which leaves exp(w) N(0, I) invariant. sigma = 1
 * proposes independent prior draws.
 */
StepOutcome mwg_smooth_step(ChainState& state, const SmoothKernel& target, double sigma, RandomStream& rng);

/// Per-chain step counts so that seeds plus steps total `samples`.
std::vector<std::size_t> chain_lengths(std::size_t samples, std::size_t chains);

struct ChainRun {
  std::vector<ChainState> samples;  // chain by chain, each starting with its seed
  std::vector<std::size_t> chain_of;
  std::uint64_t new_calls = 0;
  double acceptance = 0.0;  // after burn-in, pooled
  double step_size = 0.0;   // frozen value after adaptation
};

/**
 * Advances every seed by its number of steps in synchronous sweeps. During
 * the first `burn_in` sweeps the step size follows dual averaging on the
 * pooled acceptance rate; afterwards it is frozen. Chain c draws from
 * rng.substream(c), so the output does not depend on `jobs`. Throws
 * ConfigError for an empty seed set.
 */
ChainRun run_chains(std::span<const ChainState> seeds, const Kernel& kernel, std::span<const std::size_t> steps,
                    const KernelConfig& config, const RandomStream& rng, std::size_t jobs = 1);

}  // namespace ris

#endif  // RIS_SAMPLER_HPP
