#include "ris/fragility.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

#include "json.hpp"
#include "ris/errors.hpp"

namespace ris {
namespace {

using nlohmann::json;

// Ascending uniform axis over the coarse range with every coarse value placed
// exactly; falls back to the union when two coarse values share a slot.
std::vector<double> dense_axis(std::vector<double> coarse, std::size_t points) {
  std::sort(coarse.begin(), coarse.end());
  if (coarse.size() == 1 || points <= coarse.size()) return coarse;
  const double lo = coarse.front(), hi = coarse.back();
  const std::size_t m = points;
  const double h = (hi - lo) / static_cast<double>(m - 1);
  std::vector<double> axis(m);
  for (std::size_t k = 0; k < m; ++k) axis[k] = lo + h * static_cast<double>(k);
  std::vector<bool> taken(m, false);
  bool collided = false;
  for (double c : coarse) {
    const auto k = static_cast<std::size_t>(std::llround((c - lo) / h));
    const std::size_t slot = std::min(k, m - 1);
    if (taken[slot]) collided = true;
    taken[slot] = true;
    axis[slot] = c;
  }
  if (collided) {
    for (std::size_t k = 0; k < m; ++k) axis[k] = lo + h * static_cast<double>(k);
    axis.insert(axis.end(), coarse.begin(), coarse.end());
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end(),
                           [h](double a, double b) { return std::fabs(a - b) < 1e-9 * std::max(h, 1e-300); }),
               axis.end());
    for (double c : coarse) *std::min_element(axis.begin(), axis.end(), [c](double a, double b) {
      return std::fabs(a - c) < std::fabs(b - c);
    }) = c;
  }
  axis.front() = lo;
  axis.back() = hi;
  return axis;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rows t run over ascending thresholds, columns a over ascending PGA. up(v) is
// the least majorant nonincreasing in t and nondecreasing in a, down(v) the
// greatest such minorant.
std::vector<double> up(std::vector<double> v, std::size_t rows, std::size_t cols) {
  for (std::size_t t = rows; t-- > 0;)
    for (std::size_t a = 0; a < cols; ++a) {
      double& x = v[t * cols + a];
      if (t + 1 < rows) x = std::max(x, v[(t + 1) * cols + a]);
      if (a > 0) x = std::max(x, v[t * cols + a - 1]);
    }
  return v;
}

std::vector<double> down(std::vector<double> v, std::size_t rows, std::size_t cols) {
  for (std::size_t t = 0; t < rows; ++t)
    for (std::size_t a = cols; a-- > 0;) {
      double& x = v[t * cols + a];
      if (t > 0) x = std::min(x, v[(t - 1) * cols + a]);
      if (a + 1 < cols) x = std::min(x, v[t * cols + a + 1]);
    }
  return v;
}

// Midpoint of the monotone envelopes after clipping every value into the
// bracket its ordered neighbours among the pinned nodes allow. Pinned values
// come back unchanged; when they are themselves ordered, so is the result.
void monotone_fill(std::vector<double>& v, const std::vector<bool>& pinned, std::size_t rows, std::size_t cols) {
  std::vector<double> lo_seed(v.size(), -kInf), hi_seed(v.size(), kInf);
  for (std::size_t k = 0; k < v.size(); ++k)
    if (pinned[k]) lo_seed[k] = hi_seed[k] = v[k];
  const auto lo = up(std::move(lo_seed), rows, cols);
  const auto hi = down(std::move(hi_seed), rows, cols);
  std::vector<double> c = v;
  for (std::size_t k = 0; k < c.size(); ++k) {
    c[k] = std::clamp(c[k], 0.0, 1.0);
    if (!pinned[k] && lo[k] <= hi[k]) c[k] = std::clamp(c[k], lo[k], hi[k]);
  }
  const auto u = up(c, rows, cols), l = down(c, rows, cols);
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!pinned[k]) v[k] = 0.5 * (u[k] + l[k]);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing: " + std::strerror(errno));
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw IoError("failed while writing " + path.string() + ": " + std::strerror(errno));
}

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

FragilitySurface assemble_surface(const SurfaceGrid& grid, const IntensityMapping& mapping, std::size_t pga_points,
                                  std::size_t threshold_points, const RunMetadata& metadata) {
  if (!grid.complete()) {
    std::string missing;
    for (std::size_t i = 0; i < grid.axes.rows(); ++i) {
      for (std::size_t j = 0; j < grid.axes.columns(); ++j) {
        const std::size_t k = i * grid.axes.columns() + j;
        if (k >= grid.probability.size() || !std::isfinite(grid.probability[k])) {
          missing += " (" + std::to_string(i) + ", " + std::to_string(j) + ")";
        }
      }
    }
    throw ConfigError("cannot assemble an incomplete grid; missing cells:" + missing);
  }
  if (!(mapping.base_pga > 0.0)) throw ConfigError("base PGA must be positive");
  if (pga_points == 0 || threshold_points == 0) throw ConfigError("dense resolution must be positive");

  const std::vector<double> xi = dense_axis(grid.axes.xi, pga_points);
  std::vector<double> eps = dense_axis(grid.axes.epsilon, threshold_points);
  std::reverse(eps.begin(), eps.end());  // thresholds ascend as eps descends

  FragilitySurface surface;
  surface.provenance = grid.method == SurfaceMethod::is_one ? "is1-reweighting" : "is2-extrapolation";
  surface.mapping = mapping;
  surface.metadata = metadata;
  if (surface.metadata.calls == 0) surface.metadata.calls = grid.calls;
  for (double v : xi) surface.pga.push_back(v * mapping.base_pga);
  for (double e : eps) surface.threshold.push_back(mapping.reference_threshold - e);
  surface.probability.reserve(xi.size() * eps.size());
  std::vector<bool> pinned;
  const auto on_axis = [](const std::vector<double>& axis, double v) {
    return std::find(axis.begin(), axis.end(), v) != axis.end();
  };
  for (double e : eps) {
    for (double v : xi) {
      surface.probability.push_back(query_surface(grid, e, v));
      pinned.push_back(on_axis(grid.axes.epsilon, e) && on_axis(grid.axes.xi, v));
    }
  }
  monotone_fill(surface.probability, pinned, eps.size(), xi.size());
  return surface;
}

FragilityCurve extract_curve(const FragilitySurface& surface, double b) {
  const auto& th = surface.threshold;
  if (th.empty()) throw RangeError("empty surface has no curves");
  const double tol = 1e-12 * std::max(1.0, std::fabs(b));
  if (b < th.front() - tol || b > th.back() + tol) {
    throw RangeError("threshold " + std::to_string(b) + " outside [" + std::to_string(th.front()) + ", " +
                     std::to_string(th.back()) + "]");
  }
  FragilityCurve curve;
  curve.threshold = b;
  curve.pga = surface.pga;
  std::size_t k = 0;
  while (k + 1 < th.size() && th[k + 1] <= b) ++k;
  const bool exact = std::fabs(th[k] - b) <= tol || k + 1 == th.size();
  for (std::size_t l = 0; l < surface.pga.size(); ++l) {
    if (exact) {
      curve.probability.push_back(surface.at(k, l));
    } else {
      const double t = (b - th[k]) / (th[k + 1] - th[k]);
      curve.probability.push_back((1.0 - t) * surface.at(k, l) + t * surface.at(k + 1, l));
    }
  }
  return curve;
}

void write_csv(const FragilitySurface& surface, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "pga_g,threshold_m,probability\n";
  for (std::size_t k = 0; k < surface.threshold.size(); ++k) {
    for (std::size_t l = 0; l < surface.pga.size(); ++l) {
      out << csv_number(surface.pga[l]) << ',' << csv_number(surface.threshold[k]) << ','
          << csv_number(surface.at(k, l)) << '\n';
    }
  }
  close_out(out, path);
}

void write_csv(const FragilityCurve& curve, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "pga_g,threshold_m,probability\n";
  for (std::size_t l = 0; l < curve.pga.size(); ++l) {
    out << csv_number(curve.pga[l]) << ',' << csv_number(curve.threshold) << ',' << csv_number(curve.probability[l])
        << '\n';
  }
  close_out(out, path);
}

void write_json(const FragilitySurface& surface, const std::filesystem::path& path) {
  json doc;
  doc["format"] = "ris-fragility-surface";
  doc["version"] = 1;
  doc["provenance"] = surface.provenance;
  doc["pga_g"] = surface.pga;
  doc["threshold_m"] = surface.threshold;
  json rows = json::array();
  for (std::size_t k = 0; k < surface.threshold.size(); ++k) {
    rows.push_back(std::vector<double>(surface.probability.begin() + static_cast<std::ptrdiff_t>(k * surface.pga.size()),
                                       surface.probability.begin() +
                                           static_cast<std::ptrdiff_t>((k + 1) * surface.pga.size())));
  }
  doc["probability"] = rows;
  doc["mapping"] = {{"base_pga_g", surface.mapping.base_pga},
                    {"reference_threshold_m", surface.mapping.reference_threshold},
                    {"yield_displacement_m", surface.mapping.yield_displacement}};
  if (surface.mapping.yield_displacement > 0.0) {
    std::vector<double> multiples;
    for (double b : surface.threshold) multiples.push_back(b / surface.mapping.yield_displacement);
    doc["threshold_uy"] = multiples;
  }
  doc["metadata"] = {{"seed", surface.metadata.seed},
                     {"calls", surface.metadata.calls},
                     {"config_hash", surface.metadata.config_hash}};
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  close_out(out, path);
}

FragilitySurface read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
  json doc;
  try {
    in >> doc;
    FragilitySurface s;
    if (doc.at("format").get<std::string>() != "ris-fragility-surface") throw ConfigError("not a fragility surface");
    s.provenance = doc.at("provenance").get<std::string>();
    s.pga = doc.at("pga_g").get<std::vector<double>>();
    s.threshold = doc.at("threshold_m").get<std::vector<double>>();
    const auto rows = doc.at("probability").get<std::vector<std::vector<double>>>();
    if (rows.size() != s.threshold.size()) throw ConfigError("probability rows do not match the threshold axis");
    for (const auto& row : rows) {
      if (row.size() != s.pga.size()) throw ConfigError("probability row does not match the PGA axis");
      s.probability.insert(s.probability.end(), row.begin(), row.end());
    }
    const auto& m = doc.at("mapping");
    s.mapping.base_pga = m.at("base_pga_g").get<double>();
    s.mapping.reference_threshold = m.at("reference_threshold_m").get<double>();
    s.mapping.yield_displacement = m.at("yield_displacement_m").get<double>();
    const auto& meta = doc.at("metadata");
    s.metadata.seed = meta.at("seed").get<std::uint64_t>();
    s.metadata.calls = meta.at("calls").get<std::uint64_t>();
    s.metadata.config_hash = meta.at("config_hash").get<std::string>();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": malformed surface file: " + e.what());
  }
}

}  // namespace ris
