#ifndef RIS_FRAGILITY_HPP
#define RIS_FRAGILITY_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ris/surface.hpp"

namespace ris {

/// Physical reading of the relaxation parameters: PGA = xi * base_pga and
/// b = reference_threshold - eps.
struct IntensityMapping {
  double base_pga = 0.05;              // g at xi = 1
  double reference_threshold = 0.0;    // b at eps = 0, metres
  double yield_displacement = 0.0;     // for u_y multiples in metadata; 0 if not applicable

  bool operator==(const IntensityMapping&) const = default;
};

struct RunMetadata {
  std::uint64_t seed = 0;
  std::uint64_t calls = 0;
  std::string config_hash;

  bool operator==(const RunMetadata&) const = default;
};

/// Probabilities over ascending PGA (g) and ascending threshold (m), stored
/// row-major by threshold.
struct FragilitySurface {
  std::vector<double> pga;
  std::vector<double> threshold;
  std::vector<double> probability;
  std::string provenance;  // "is1-reweighting" or "is2-extrapolation"
  IntensityMapping mapping;
  RunMetadata metadata;

  double at(std::size_t threshold_index, std::size_t pga_index) const {
    return probability.at(threshold_index * pga.size() + pga_index);
  }
  bool operator==(const FragilitySurface&) const = default;
};

struct FragilityCurve {
  double threshold = 0.0;
  std::vector<double> pga;
  std::vector<double> probability;
};

/**
 * Dense surface of `pga_points` x `threshold_points` values (never fewer than
 * the coarse axes) from grid queries, without limit-state calls. The dense
 * axes are uniform with each coarse node snapped onto its nearest dense
 * point, so coarse nodes reproduce the stored probabilities. Off-node values
 * are clipped to [0, 1] and smoothed onto the midpoint of their monotone
 * envelopes (nondecreasing in PGA, nonincreasing in threshold). Throws
 * ConfigError listing the missing cells of an incomplete grid.
 */
FragilitySurface assemble_surface(const SurfaceGrid& grid, const IntensityMapping& mapping,
                                  std::size_t pga_points = 50, std::size_t threshold_points = 50,
                                  const RunMetadata& metadata = {});

/// Slice at threshold b, linear in b between dense rows. Throws RangeError
/// outside the threshold axis.
FragilityCurve extract_curve(const FragilitySurface& surface, double b);

void write_csv(const FragilitySurface& surface, const std::filesystem::path& path);
void write_csv(const FragilityCurve& curve, const std::filesystem::path& path);
void write_json(const FragilitySurface& surface, const std::filesystem::path& path);
FragilitySurface read_json(const std::filesystem::path& path);

}  // namespace ris

#endif  // RIS_FRAGILITY_HPP
