#ifndef RIS_SURFACE_HPP
#define RIS_SURFACE_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ris/failure_ratio.hpp"
#include "ris/problem.hpp"
#include "ris/random.hpp"
#include "ris/relaxation.hpp"
#include "ris/sampler.hpp"

namespace ris {

enum class SurfaceMethod { is_one, is_two };

const char* to_string(SurfaceMethod method) noexcept;

/// Grid axes for the two relaxation parameters. The event at (eps, xi) is
/// G(x) <= eps with x ~ N(0, xi^2 I). epsilon decreases to 0, xi to 1.
struct SurfaceAxes {
  std::vector<double> epsilon;
  std::vector<double> xi;

  /// Evenly spaced axes eps_max..0 and xi_max..1.
  static SurfaceAxes uniform(double eps_max, std::size_t eps_count, double xi_max, std::size_t xi_count);
  void validate() const;
  std::size_t rows() const noexcept { return epsilon.size(); }
  std::size_t columns() const noexcept { return xi.size(); }
};

struct SurfaceConfig {
  std::size_t samples_per_level = 0;  // 0 picks 100 for IS-I and 1000 for IS-II
  double level_probability = 0.1;     // quantile steps along epsilon
  double delta_target = 1.5;          // IS-I weight CoV target along xi
  double rho = 0.25;                  // IS-II target failure-ratio step along xi
  std::size_t max_steps = 50;         // per phase-one route and per epsilon sweep
  std::size_t dimension_cap = 20;     // IS-I refuses larger problems
  std::size_t max_backoff = 8;
  double fallback_factor = 0.8;       // IS-II xi step when the ratio model cannot be fitted
  KernelConfig kernel;
  std::size_t jobs = 1;

  std::size_t samples_for(SurfaceMethod method) const noexcept;
  std::size_t seeds_for(SurfaceMethod method) const noexcept;
  void validate() const;
};

/// Coarse grid of P(eps_i, xi_j) with the data needed for off-grid queries.
/// Node (i, j) is stored row-major at i * columns + j.
struct SurfaceGrid {
  SurfaceMethod method = SurfaceMethod::is_one;
  SurfaceAxes axes;
  std::size_t dimension = 0;
  std::size_t samples_per_level = 0;
  std::vector<double> probability;
  std::vector<std::vector<ChainState>> node_samples;  // IS-I: samples from each node's restricted density
  std::vector<std::vector<RatioPoint>> row_points;    // IS-II: (xi R, P) per epsilon row
  std::vector<FailureRatioCurve> row_curves;          // IS-II
  std::vector<bool> row_fitted;                       // IS-II: false where the curve fit failed
  std::vector<LevelRecord> route;                     // every level in run order, samples dropped
  std::uint64_t calls = 0;
  std::vector<std::string> warnings;

  double at(std::size_t i, std::size_t j) const { return probability.at(i * axes.columns() + j); }
  bool complete() const;
  /// Reference radius sqrt(n) of the spherical formulation.
  double reference_radius() const;
};

/**
 * Coupled scale/threshold relaxation. Phase one anneals xi along the first
 * epsilon row with Gaussian scale weights, landing on every grid xi; from
 * each row node the epsilon direction is swept with quantile steps that land
 * on every grid epsilon. Node samples are kept for reweighting queries.
 * Throws ConfigError above the dimension cap.
 */
SurfaceGrid is_one(const ReliabilityProblem& problem, const SurfaceAxes& axes, const SurfaceConfig& config,
                   const RandomStream& rng);

/**
 * Spherical relaxation: x ~ N(0, I) restricted to G(xi x) <= eps. xi steps
 * along the first row come from the failure-ratio model fitted to the
 * probabilities seen so far; each step pays N calls to evaluate the new
 * indicator on the current samples. Ratio curves are fitted per epsilon row
 * after the run.
 */
SurfaceGrid is_two(const ReliabilityProblem& problem, const SurfaceAxes& axes, const SurfaceConfig& config,
                   const RandomStream& rng);

/// (i, j) of the grid cell [eps_{i+1}, eps_i] x [xi_{j+1}, xi_j] holding the
/// query. Throws RangeError outside the grid.
std::pair<std::size_t, std::size_t> locate_cell(const SurfaceAxes& axes, double eps, double xi);

/// Reweighted estimate from the samples of node (i, j). Throws RangeError if
/// (eps, xi) is outside that cell.
double is_one_query(const SurfaceGrid& grid, std::size_t i, std::size_t j, double eps, double xi);
double is_one_query(const SurfaceGrid& grid, double eps, double xi);

/// P_ij theta(xi R; eps) / theta(xi_j R; eps_i), log-linear in eps between
/// row curves. Throws RangeError if (eps, xi) is outside the cell.
double is_two_query(const SurfaceGrid& grid, std::size_t i, std::size_t j, double eps, double xi);
double is_two_query(const SurfaceGrid& grid, double eps, double xi);

/// Dispatches on the grid's method; grid nodes return their stored value.
double query_surface(const SurfaceGrid& grid, double eps, double xi);

/// The run seen as a single estimate of P(eps_last, 1).
RunResult surface_run_result(const SurfaceGrid& grid);

}  // namespace ris

#endif  // RIS_SURFACE_HPP
