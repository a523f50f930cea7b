#include "ris/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "ris/errors.hpp"
#include "ris/oracle.hpp"
#include "ris/parallel.hpp"
#include "ris/strategies.hpp"

namespace ris {
namespace {

using nlohmann::json;

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

SurfaceAxes estimate_axes(double xi_max) {
  if (!(xi_max > 1.0)) throw ConfigError("estimate_xi_max must exceed 1");
  return SurfaceAxes{{0.0}, {xi_max, 1.0}};
}

RunResult direct_run(const ReliabilityProblem& problem, std::size_t samples, const RandomStream& rng,
                     std::size_t jobs) {
  const auto mc = direct_mc(problem, samples, rng, 1.0, 0.0, jobs);
  RunResult r;
  r.pf = mc.probability;
  r.calls = mc.samples;
  if (mc.zero_hits) r.warnings.push_back("direct Monte Carlo saw no failures");
  return r;
}

}  // namespace

RunResult run_once(const RunConfig& config, const ReliabilityProblem& problem, const RandomStream& rng,
                   std::size_t jobs) {
  const ReliabilityProblem local = problem.fresh();  // own call counter per run
  StrategyConfig sc = config.strategy;
  sc.jobs = jobs;
  SurfaceConfig fc = config.surface;
  fc.jobs = jobs;
  const std::string& m = config.method;
  if (m == "ss") return subset_simulation(local, sc, rng);
  if (m == "sis") return sequential_is(local, sc, rng);
  if (m == "ais") return annealed_is(local, sc, rng);
  if (m == "is1") return surface_run_result(is_one(local, estimate_axes(config.estimate_xi_max), fc, rng));
  if (m == "is2") return surface_run_result(is_two(local, estimate_axes(config.estimate_xi_max), fc, rng));
  if (m == "dmc") return direct_run(local, config.dmc_samples, rng, jobs);
  throw ConfigError("unknown method '" + m + "' (expected ss, sis, ais, is1, is2 or dmc)");
}

EstimateStats run_estimate(const RunConfig& config) {
  if (config.reps == 0) throw ConfigError("reps must be at least 1");
  const ReliabilityProblem problem = build_problem(config.problem);
  if (config.reps == 1) {
    RunResult r = run_once(config, problem, RandomStream(config.seed, 0), config.jobs);
    EstimateStats s;
    s.mean = r.pf;
    s.cov = std::numeric_limits<double>::quiet_NaN();
    s.mean_calls = static_cast<double>(r.calls);
    s.estimates = {r.pf};
    s.calls = {r.calls};
    s.warnings = std::move(r.warnings);
    for (auto& level : r.levels) level.samples.clear();
    s.trace = std::move(r.levels);
    return s;
  }
  const Runner runner = [&](const RandomStream& rng) { return run_once(config, problem, rng, 1); };
  return replicate_and_cov(runner, config.reps, config.seed, config.jobs);
}

json to_json(const EstimateStats& s) {
  json trace = json::array();
  for (const auto& l : s.trace) {
    trace.push_back({{"index", l.index},
                     {"lambda", l.lambda},
                     {"epsilon", l.epsilon},
                     {"xi", l.xi},
                     {"probability", l.probability},
                     {"ratio", l.ratio},
                     {"calls", l.calls},
                     {"acceptance", l.acceptance},
                     {"step_size", l.step_size}});
  }
  const std::size_t reps = s.estimates.size();
  return {{"pf_mean", s.mean},
          {"cov", s.cov},
          {"standard_error", reps > 1 ? json(s.standard_error()) : json(nullptr)},
          {"mean_calls", s.mean_calls},
          {"reps", reps},
          {"estimates", s.estimates},
          {"calls", s.calls},
          {"warnings", s.warnings},
          {"trace", trace}};
}

std::string summary_text(const RunConfig& config, const EstimateStats& s) {
  std::ostringstream out;
  out << "problem " << config.problem.type << "  method " << config.method << "  reps " << s.estimates.size()
      << "  seed " << config.seed << "\n";
  out << "P_f " << fmt("%.4e", s.mean);
  if (std::isfinite(s.cov)) out << "  delta " << fmt("%.4f", s.cov);
  out << "  mean calls " << fmt("%.0f", s.mean_calls) << "  levels " << s.trace.size() << "\n";
  if (!s.warnings.empty()) out << s.warnings.size() << " warning(s); first: " << s.warnings.front() << "\n";
  return out.str();
}

RunConfig with_fragility_defaults(RunConfig config) {
  const double base = base_intensity(config.problem);
  const double uy = yield_displacement(config.problem);
  if (!config.intensity_range) config.intensity_range = std::array<double, 2>{base, 8.0 * base};
  if (!config.threshold_range) {
    if (config.problem.type != "seismic") {
      throw ConfigError("a threshold range is required for the " + config.problem.type + " problem");
    }
    config.threshold_range = std::array<double, 2>{uy, 2.0 * uy};
  }
  return config;
}

FragilitySetup fragility_setup(const RunConfig& input) {
  const RunConfig config = with_fragility_defaults(input);
  FragilitySetup st;
  st.problem = config.problem;
  const double base = base_intensity(st.problem);
  const double uy = yield_displacement(st.problem);
  const auto pga = *config.intensity_range;
  const auto thr = *config.threshold_range;
  if (!(pga[0] > 0.0) || !(pga[0] < pga[1])) throw ConfigError("intensity range needs 0 < low < high");
  if (!(thr[0] < thr[1])) throw ConfigError("threshold range needs low < high");
  if (config.grid_intensity < 2 || config.grid_threshold < 2) throw ConfigError("grid needs at least 2 x 2 nodes");

  st.problem.threshold = thr[1];
  st.problem.input_scale *= pga[0] / base;
  st.axes = SurfaceAxes::uniform(thr[1] - thr[0], config.grid_threshold, pga[1] / pga[0], config.grid_intensity);
  st.mapping = IntensityMapping{pga[0], thr[1], uy};
  return st;
}

FragilityRun run_fragility(const RunConfig& config) {
  if (config.method != "is1" && config.method != "is2") {
    throw ConfigError("fragility needs method is1 or is2, not '" + config.method + "'");
  }
  const FragilitySetup st = fragility_setup(config);
  const ReliabilityProblem problem = build_problem(st.problem);
  SurfaceConfig sc = config.surface;
  sc.jobs = config.jobs;
  const RandomStream rng(config.seed, 0);
  FragilityRun run;
  run.grid = config.method == "is1" ? is_one(problem, st.axes, sc, rng) : is_two(problem, st.axes, sc, rng);
  const RunMetadata meta{config.seed, run.grid.calls, config_hash(config)};
  run.surface = assemble_surface(run.grid, st.mapping, config.dense_intensity, config.dense_threshold, meta);
  for (double b : config.curves) run.curves.push_back(extract_curve(run.surface, b));
  return run;
}

bool BenchTable::all_pass() const {
  for (bool p : pass)
    if (!p) return false;
  return true;
}

std::string BenchTable::csv() const {
  std::ostringstream out;
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << "\n";
  }
  return out.str();
}

BenchTable bench_table1(std::uint64_t seed, std::size_t reps, std::size_t jobs) {
  struct Row {
    double d, reference, tol;
    const char* method;
    double calls, delta;
  };
  const Row table[] = {
      {5, 3.02e-3, 0.10, "ais", 2800, 0.1438}, {5, 3.02e-3, 0.10, "ss", 2800, 0.2301},
      {7, 3.46e-4, 0.12, "ais", 2800, 0.1715}, {7, 3.46e-4, 0.12, "ss", 3700, 0.2848},
      {9, 4.20e-5, 0.15, "ais", 2800, 0.1740}, {9, 4.20e-5, 0.15, "ss", 4600, 0.3488},
  };
  BenchTable t;
  t.suite = "table1";
  t.columns = {"d", "method", "reps", "pf", "reference", "rel_err", "tol", "delta", "ref_delta",
               "mean_calls", "ref_calls", "pass"};
  std::uint64_t row_seed = seed;
  for (const auto& r : table) {
    RunConfig c;
    c.problem = parse_problem("parabolic:d=" + fmt("%g", r.d));
    c.method = r.method;
    c.seed = row_seed++ * 1000003ull;
    c.reps = reps;
    c.jobs = jobs;
    const auto s = run_estimate(c);
    const double rel = std::fabs(s.mean - r.reference) / r.reference;
    const bool ok = rel <= r.tol && s.cov >= 0.5 * r.delta && s.cov <= 2.0 * r.delta &&
                    s.mean_calls >= 0.5 * r.calls && s.mean_calls <= 2.0 * r.calls;
    t.rows.push_back({fmt("%g", r.d), r.method, std::to_string(reps), fmt("%.4e", s.mean), fmt("%.3g", r.reference),
                      fmt("%.4f", rel), fmt("%.2f", r.tol), fmt("%.4f", s.cov), fmt("%.4f", r.delta),
                      fmt("%.0f", s.mean_calls), fmt("%.0f", r.calls), ok ? "pass" : "fail"});
    t.pass.push_back(ok);
  }
  return t;
}

BenchTable bench_analytic(std::uint64_t seed, std::size_t reps, std::size_t jobs) {
  BenchTable t;
  t.suite = "analytic";
  t.columns = {"beta", "method", "n", "reps", "pf", "exact", "std_err", "z", "mean_calls", "pass"};
  std::uint64_t row_seed = seed;
  for (double beta : {2.0, 3.0, 4.0}) {
    for (const char* method : {"ss", "sis", "ais", "is2"}) {
      const bool spherical = std::string(method) == "is2";
      const std::size_t n = spherical ? 1000 : 2;
      RunConfig c;
      c.problem = parse_problem("linear:beta=" + fmt("%g", beta) + ",n=" + std::to_string(n));
      c.method = method;
      c.seed = row_seed++ * 1000003ull + 17;
      c.reps = reps;
      c.jobs = jobs;
      c.estimate_xi_max = beta;
      const auto s = run_estimate(c);
      const double exact = halfspace_probability(beta);
      const double se = s.standard_error();
      const double z = (s.mean - exact) / se;
      const bool ok = std::fabs(z) <= 3.0;
      t.rows.push_back({fmt("%g", beta), method, std::to_string(n), std::to_string(reps), fmt("%.4e", s.mean),
                        fmt("%.4e", exact), fmt("%.3e", se), fmt("%.3f", z), fmt("%.0f", s.mean_calls),
                        ok ? "pass" : "fail"});
      t.pass.push_back(ok);
    }
  }
  return t;
}

}  // namespace ris
