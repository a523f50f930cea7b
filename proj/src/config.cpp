#include "ris/config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>

#include "ris/bouc_wen.hpp"
#include "ris/errors.hpp"
#include "ris/excitation.hpp"
#include "ris/seismic.hpp"

namespace ris {
namespace {

using nlohmann::json;

double to_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("bad number '" + std::string(text) + "' for " + std::string(what));
  return v;
}

std::size_t to_count(double v, std::string_view what) {
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) {
    throw ConfigError(std::string(what) + " must be a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, std::string_view where) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  std::set<std::string> names(known.begin(), known.end());
  for (const auto& [key, value] : obj.items()) {
    if (!names.count(key)) throw ConfigError("unknown key '" + key + "' in " + std::string(where));
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

void read_count(const json& obj, const char* key, std::size_t& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() && !v.is_number_unsigned()) throw ConfigError(std::string("config key '") + key + "' must be an integer");
  const auto n = v.get<long long>();
  if (n < 0) throw ConfigError(std::string("config key '") + key + "' must be non-negative");
  out = static_cast<std::size_t>(n);
}

std::array<double, 2> read_range(const json& v, const char* key) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(std::string("'") + key + "' must be a [low, high] pair");
  }
  std::array<double, 2> r{v[0].get<double>(), v[1].get<double>()};
  if (!(r[0] < r[1])) throw ConfigError(std::string("'") + key + "' needs low < high");
  return r;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

ProblemSpec parse_problem(std::string_view text) {
  ProblemSpec spec;
  const auto colon = text.find(':');
  spec.type = trim(text.substr(0, colon));
  if (spec.type != "parabolic" && spec.type != "linear" && spec.type != "seismic") {
    throw ConfigError("unknown problem '" + spec.type + "' (expected parabolic, linear or seismic)");
  }
  if (spec.type == "seismic") spec.dimension = 0;
  double b_uy = std::numeric_limits<double>::quiet_NaN();
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string item = trim(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError("problem option '" + item + "' is not key=value");
      const std::string key = trim(item.substr(0, eq));
      const std::string value = trim(item.substr(eq + 1));
      if (key == "excitation" && spec.type == "seismic") {
        spec.excitation = value;
      } else if ((key == "d" && spec.type == "parabolic") || (key == "beta" && spec.type == "linear") ||
                 (key == "b" && spec.type == "seismic")) {
        spec.threshold = to_number(value, key);
      } else if (key == "b_uy" && spec.type == "seismic") {
        b_uy = to_number(value, key);
      } else if (key == "n" && spec.type != "parabolic") {
        spec.dimension = to_count(to_number(value, key), "n");
      } else if (key == "s0" && spec.type == "seismic") {
        spec.s0 = to_number(value, key);
      } else if (key == "substeps" && spec.type == "seismic") {
        spec.substeps = to_count(to_number(value, key), "substeps");
      } else {
        throw ConfigError("unknown option '" + key + "' for problem " + spec.type);
      }
    }
  }
  if (spec.type == "seismic") {
    if (spec.excitation != "records" && spec.excitation != "white-noise") {
      throw ConfigError("seismic excitation must be 'records' or 'white-noise'");
    }
    if (spec.dimension == 0) spec.dimension = spec.excitation == "records" ? 2 : 1000;
    if (std::isfinite(b_uy)) spec.threshold = b_uy * BoucWenParams{}.yield_displacement();
  }
  return spec;
}

ProblemSpec problem_from_json(const json& j) {
  if (j.is_string()) return parse_problem(j.get<std::string>());
  reject_unknown(j, {"type", "threshold", "dimension", "excitation", "record_files", "s0", "omega_max", "substeps",
                     "input_scale", "threshold_uy"},
                 "problem");
  ProblemSpec spec;
  read(j, "type", spec.type);
  spec.dimension = spec.type == "seismic" ? 0 : 2;
  read(j, "excitation", spec.excitation);
  std::string probe = spec.type;
  if (spec.type == "seismic") probe += ":excitation=" + spec.excitation;
  ProblemSpec base = parse_problem(probe);
  spec.dimension = base.dimension;
  if (j.contains("threshold") && !j.at("threshold").is_null()) read(j, "threshold", spec.threshold);
  if (j.contains("threshold_uy")) {
    double m = 0.0;
    read(j, "threshold_uy", m);
    spec.threshold = m * BoucWenParams{}.yield_displacement();
  }
  read_count(j, "dimension", spec.dimension);
  read(j, "record_files", spec.record_files);
  read(j, "s0", spec.s0);
  read(j, "omega_max", spec.omega_max);
  read_count(j, "substeps", spec.substeps);
  read(j, "input_scale", spec.input_scale);
  return spec;
}

json to_json(const ProblemSpec& spec) {
  json j;
  j["type"] = spec.type;
  j["threshold"] = resolved_threshold(spec);
  j["dimension"] = spec.dimension;
  j["input_scale"] = spec.input_scale;
  if (spec.type == "seismic") {
    j["excitation"] = spec.excitation;
    j["record_files"] = spec.record_files;
    j["s0"] = spec.s0;
    j["omega_max"] = spec.omega_max;
    j["substeps"] = spec.substeps;
  }
  return j;
}

double resolved_threshold(const ProblemSpec& spec) {
  if (std::isfinite(spec.threshold)) return spec.threshold;
  if (spec.type == "parabolic") return 5.0;
  if (spec.type == "linear") return 3.0;
  return BoucWenParams{}.yield_displacement();
}

double base_intensity(const ProblemSpec& spec) { return spec.type == "seismic" ? 0.05 : 1.0; }

double yield_displacement(const ProblemSpec& spec) {
  return spec.type == "seismic" ? BoucWenParams{}.yield_displacement() : 0.0;
}

ReliabilityProblem build_problem(const ProblemSpec& spec) {
  if (!(spec.input_scale > 0.0)) throw ConfigError("input_scale must be positive");
  const double b = resolved_threshold(spec);
  ReliabilityProblem base = [&]() -> ReliabilityProblem {
    if (spec.type == "parabolic") {
      if (spec.dimension != 2) throw ConfigError("the parabolic problem is two-dimensional");
      return make_parabolic_problem(b);
    }
    if (spec.type == "linear") {
      if (spec.dimension < 1) throw ConfigError("linear problem needs n >= 1");
      return make_linear_problem(b, spec.dimension);
    }
    if (spec.type == "seismic") {
      if (spec.substeps == 0) throw ConfigError("substeps must be positive");
      ExcitationModel model;
      if (spec.excitation == "records") {
        if (spec.dimension != 2) throw ConfigError("the record-combination excitation has two variables");
        if (spec.record_files.empty()) {
          model = make_synthetic_record_model();
        } else {
          if (spec.record_files.size() != 2) throw ConfigError("record_files needs exactly two paths");
          model = make_two_record_model({read_record(spec.record_files[0]), read_record(spec.record_files[1])});
        }
      } else if (spec.excitation == "white-noise") {
        model = make_white_noise_model(spec.dimension, spec.s0, spec.omega_max);
      } else {
        throw ConfigError("seismic excitation must be 'records' or 'white-noise'");
      }
      return make_seismic_problem(b, BoucWenParams{}, std::move(model), spec.substeps);
    }
    throw ConfigError("unknown problem '" + spec.type + "'");
  }();
  if (spec.input_scale == 1.0) return base;
  const double s = spec.input_scale;
  return ReliabilityProblem(base.name(), base.dimension(), [base, s](std::span<const double> x) {
    std::vector<double> y(x.begin(), x.end());
    for (double& v : y) v *= s;
    return base(y);
  });
}

RunConfig parse_config(const json& input) {
  const json& doc = input.contains("config") && input.contains("command") ? input.at("config") : input;
  reject_unknown(doc, {"problem", "method", "seed", "reps", "jobs", "schedule", "kernel", "dmc_samples",
                       "estimate_xi_max", "fragility"},
                 "config");
  RunConfig c;
  if (doc.contains("problem")) c.problem = problem_from_json(doc.at("problem"));
  read(doc, "method", c.method);
  read(doc, "seed", c.seed);
  read_count(doc, "reps", c.reps);
  read_count(doc, "jobs", c.jobs);
  read_count(doc, "dmc_samples", c.dmc_samples);
  read(doc, "estimate_xi_max", c.estimate_xi_max);

  if (doc.contains("schedule")) {
    const auto& s = doc.at("schedule");
    reject_unknown(s, {"samples_per_level", "surface_samples_per_level", "level_probability", "delta_target", "rho",
                       "max_levels", "initial_relaxation", "ais_min_fraction", "ais_max_scale", "smooth_step",
                       "max_backoff", "fallback_factor", "dimension_cap"},
                   "schedule");
    read_count(s, "samples_per_level", c.strategy.samples_per_level);
    read_count(s, "surface_samples_per_level", c.surface.samples_per_level);
    read(s, "level_probability", c.strategy.level_probability);
    read(s, "delta_target", c.strategy.delta_target);
    read(s, "rho", c.surface.rho);
    read_count(s, "max_levels", c.strategy.max_levels);
    if (s.contains("initial_relaxation") && !s.at("initial_relaxation").is_null()) {
      double v = 0.0;
      read(s, "initial_relaxation", v);
      c.strategy.initial_relaxation = v;
    }
    read(s, "ais_min_fraction", c.strategy.ais_min_fraction);
    read(s, "ais_max_scale", c.strategy.ais_max_scale);
    read(s, "smooth_step", c.strategy.smooth_step);
    read_count(s, "max_backoff", c.surface.max_backoff);
    read(s, "fallback_factor", c.surface.fallback_factor);
    read_count(s, "dimension_cap", c.surface.dimension_cap);
  }
  if (doc.contains("kernel")) {
    const auto& k = doc.at("kernel");
    reject_unknown(k, {"step_size", "leapfrog_steps", "target_accept", "burn_in", "jitter"}, "kernel");
    read(k, "step_size", c.strategy.kernel.step_size);
    read_count(k, "leapfrog_steps", c.strategy.kernel.leapfrog_steps);
    read(k, "target_accept", c.strategy.kernel.target_accept);
    read_count(k, "burn_in", c.strategy.kernel.burn_in);
    read(k, "jitter", c.strategy.kernel.jitter);
  }
  c.surface.level_probability = c.strategy.level_probability;
  c.surface.delta_target = c.strategy.delta_target;
  c.surface.max_steps = c.strategy.max_levels;
  c.surface.kernel = c.strategy.kernel;

  if (doc.contains("fragility")) {
    const auto& f = doc.at("fragility");
    reject_unknown(f, {"intensity", "threshold", "threshold_uy", "grid", "dense", "curves", "curves_uy"}, "fragility");
    const double uy = BoucWenParams{}.yield_displacement();
    if (f.contains("intensity")) c.intensity_range = read_range(f.at("intensity"), "intensity");
    if (f.contains("threshold")) c.threshold_range = read_range(f.at("threshold"), "threshold");
    if (f.contains("threshold_uy")) {
      auto r = read_range(f.at("threshold_uy"), "threshold_uy");
      c.threshold_range = std::array<double, 2>{r[0] * uy, r[1] * uy};
    }
    if (f.contains("grid")) {
      const auto r = f.at("grid");
      if (!r.is_array() || r.size() != 2) throw ConfigError("'grid' must be [intensity points, threshold points]");
      c.grid_intensity = to_count(r[0].get<double>(), "grid");
      c.grid_threshold = to_count(r[1].get<double>(), "grid");
    }
    if (f.contains("dense")) {
      const auto r = f.at("dense");
      if (!r.is_array() || r.size() != 2) throw ConfigError("'dense' must be [intensity points, threshold points]");
      c.dense_intensity = to_count(r[0].get<double>(), "dense");
      c.dense_threshold = to_count(r[1].get<double>(), "dense");
    }
    read(f, "curves", c.curves);
    if (f.contains("curves_uy")) {
      std::vector<double> m;
      read(f, "curves_uy", m);
      for (double v : m) c.curves.push_back(v * uy);
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path + ": " + std::strerror(errno));
  try {
    return parse_config(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

json to_json(const RunConfig& c) {
  json j;
  j["problem"] = to_json(c.problem);
  j["method"] = c.method;
  j["seed"] = c.seed;
  j["reps"] = c.reps;
  j["dmc_samples"] = c.dmc_samples;
  j["estimate_xi_max"] = c.estimate_xi_max;
  json s;
  s["samples_per_level"] = c.strategy.samples_per_level;
  s["surface_samples_per_level"] = c.surface.samples_per_level;
  s["level_probability"] = c.strategy.level_probability;
  s["delta_target"] = c.strategy.delta_target;
  s["rho"] = c.surface.rho;
  s["max_levels"] = c.strategy.max_levels;
  s["initial_relaxation"] = c.strategy.initial_relaxation ? json(*c.strategy.initial_relaxation) : json(nullptr);
  s["ais_min_fraction"] = c.strategy.ais_min_fraction;
  s["ais_max_scale"] = c.strategy.ais_max_scale;
  s["smooth_step"] = c.strategy.smooth_step;
  s["max_backoff"] = c.surface.max_backoff;
  s["fallback_factor"] = c.surface.fallback_factor;
  s["dimension_cap"] = c.surface.dimension_cap;
  j["schedule"] = s;
  const auto& k = c.strategy.kernel;
  j["kernel"] = {{"step_size", k.step_size},
                 {"leapfrog_steps", k.leapfrog_steps},
                 {"target_accept", k.target_accept},
                 {"burn_in", k.burn_in},
                 {"jitter", k.jitter}};
  json f;
  if (c.intensity_range) f["intensity"] = *c.intensity_range;
  if (c.threshold_range) f["threshold"] = *c.threshold_range;
  f["grid"] = {c.grid_intensity, c.grid_threshold};
  f["dense"] = {c.dense_intensity, c.dense_threshold};
  f["curves"] = c.curves;
  j["fragility"] = f;
  return j;
}

std::string config_hash(const RunConfig& config) {
  const std::string text = to_json(config).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return hex64(h);
}

std::vector<double> parse_number_list(std::string_view text, double uy) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    double factor = 1.0;
    if (item.size() > 2 && item.substr(item.size() - 2) == "uy") {
      if (!(uy > 0.0)) throw ConfigError("'uy' multiples need a seismic problem");
      factor = uy;
      item = trim(item.substr(0, item.size() - 2));
    }
    out.push_back(to_number(item, "list entry") * factor);
  }
  return out;
}

}  // namespace ris
