#ifndef RIS_EXPERIMENT_HPP
#define RIS_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "ris/config.hpp"
#include "ris/fragility.hpp"
#include "ris/relaxation.hpp"
#include "ris/surface.hpp"

namespace ris {

/// One run of config.method on RandomStream(seed, r).
RunResult run_once(const RunConfig& config, const ReliabilityProblem& problem, const RandomStream& rng,
                   std::size_t jobs = 1);

/**
 * Estimate of P_f by config.method. With reps == 1 the single run on
 * RandomStream(seed, 0) is reported (cov is NaN); otherwise replications are
 * spread over `jobs` workers. The result does not depend on `jobs`.
 */
EstimateStats run_estimate(const RunConfig& config);

nlohmann::json to_json(const EstimateStats& stats);
std::string summary_text(const RunConfig& config, const EstimateStats& stats);

struct FragilityRun {
  SurfaceGrid grid;
  FragilitySurface surface;
  std::vector<FragilityCurve> curves;
};

/// Surface over config.intensity_range x config.threshold_range with
/// config.method in {is1, is2}. Seismic problems default to [0.05, 0.4] g and
/// [u_y, 2 u_y]; other problems need an explicit threshold range.
FragilityRun run_fragility(const RunConfig& config);

/// Fills in the default seismic ranges when they are absent.
RunConfig with_fragility_defaults(RunConfig config);

/// The (problem, axes, mapping) a fragility config resolves to.
struct FragilitySetup {
  ProblemSpec problem;
  SurfaceAxes axes;
  IntensityMapping mapping;
};
FragilitySetup fragility_setup(const RunConfig& config);

struct BenchTable {
  std::string suite;
  std::vector<std::string> columns;  // the last column is "pass"
  std::vector<std::vector<std::string>> rows;
  std::vector<bool> pass;

  bool all_pass() const;
  std::string csv() const;
};

/// Parabolic d in {5, 7, 9}, AIS and SS with default knobs, R replications.
BenchTable bench_table1(std::uint64_t seed = 1, std::size_t reps = 100, std::size_t jobs = 0);
/// Halfspace beta in {2, 3, 4}: SS, SIS and AIS at n = 2, IS-II at n = 1000.
BenchTable bench_analytic(std::uint64_t seed = 1, std::size_t reps = 50, std::size_t jobs = 0);

}  // namespace ris

#endif  // RIS_EXPERIMENT_HPP
