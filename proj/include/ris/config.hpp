#ifndef RIS_CONFIG_HPP
#define RIS_CONFIG_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ris/problem.hpp"
#include "ris/strategies.hpp"
#include "ris/surface.hpp"

namespace ris {

/**
 * Problem description. `threshold` is the problem's own level: d for
 * "parabolic", beta for "linear", b in metres for "seismic" (NaN picks the
 * default of each: 5, 3 and u_y).
 */
struct ProblemSpec {
  std::string type = "parabolic";  // parabolic | linear | seismic
  double threshold = std::numeric_limits<double>::quiet_NaN();
  std::size_t dimension = 2;              // linear: n; seismic white noise: number of variables
  std::string excitation = "records";     // seismic: records | white-noise
  std::vector<std::string> record_files;  // seismic records from disk instead of the bundled pair
  double s0 = 1.3e-4;
  double omega_max = 25.0 * 3.14159265358979323846;
  std::size_t substeps = 1;
  double input_scale = 1.0;  // G(input_scale * x); set when a fragility range starts above the base intensity
};

/// "parabolic:d=5", "linear:beta=3,n=1000", "seismic:excitation=white-noise,n=1000,b_uy=1.5".
ProblemSpec parse_problem(std::string_view text);
ProblemSpec problem_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ProblemSpec& spec);

double resolved_threshold(const ProblemSpec& spec);
/// Intensity at unit input scale: 0.05 g for the seismic problems, 1 otherwise.
double base_intensity(const ProblemSpec& spec);
/// u_y for seismic problems, 0 otherwise.
double yield_displacement(const ProblemSpec& spec);
ReliabilityProblem build_problem(const ProblemSpec& spec);

struct RunConfig {
  ProblemSpec problem;
  std::string method = "ais";  // ss | sis | ais | is1 | is2 | dmc
  std::uint64_t seed = 1;
  std::size_t reps = 1;
  std::size_t jobs = 0;  // 0: all logical cores
  StrategyConfig strategy;
  SurfaceConfig surface;
  std::size_t dmc_samples = 1000000;
  double estimate_xi_max = 4.0;  // is1/is2 point estimates anneal xi from here to 1

  // fragility
  std::optional<std::array<double, 2>> intensity_range;  // g for seismic, input scale otherwise
  std::optional<std::array<double, 2>> threshold_range;  // metres for seismic, problem units otherwise
  std::size_t grid_intensity = 8;
  std::size_t grid_threshold = 6;
  std::size_t dense_intensity = 50;
  std::size_t dense_threshold = 50;
  std::vector<double> curves;  // thresholds to slice
};

/// Reads a config document, or the "config" member of a run manifest.
/// Unknown keys and ill-typed values raise ConfigError.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);
/// Canonical form (all fields, fixed key order); hashing this identifies a run.
nlohmann::json to_json(const RunConfig& config);
/// FNV-1a 64 of the canonical dump, 16 hex digits.
std::string config_hash(const RunConfig& config);

/// Comma-separated numbers; a "uy" suffix multiplies by `uy`.
std::vector<double> parse_number_list(std::string_view text, double uy = 0.0);

}  // namespace ris

#endif  // RIS_CONFIG_HPP
