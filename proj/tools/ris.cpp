// Command-line front end: estimate, fragility, bench.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "ris/config.hpp"
#include "ris/errors.hpp"
#include "ris/experiment.hpp"
#include "ris/fragility.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kConfigExit = 2;
constexpr int kNumericalExit = 3;

struct CommonFlags {
  std::string problem, method, config;
  std::uint64_t seed = 0;
  std::size_t jobs = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--problem", f.problem, "problem string, e.g. parabolic:d=5, linear:beta=3,n=1000, seismic:excitation=records");
  cmd->add_option("--method", f.method, "strategy");
  cmd->add_option("--config", f.config, "JSON config or run manifest");
  cmd->add_option("--seed", f.seed, "root seed");
  cmd->add_option("--jobs", f.jobs, "worker threads (0 = logical cores)");
}

ris::RunConfig resolve(CLI::App* cmd, const CommonFlags& f) {
  ris::RunConfig c = f.config.empty() ? ris::RunConfig{} : ris::load_config(f.config);
  if (cmd->count("--problem")) c.problem = ris::parse_problem(f.problem);
  if (cmd->count("--method")) c.method = f.method;
  if (cmd->count("--seed")) c.seed = f.seed;
  if (cmd->count("--jobs")) c.jobs = f.jobs;
  return c;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ris::IoError("cannot write " + path.string());
  out << text;
  if (!out) throw ris::IoError("write failed for " + path.string());
}

std::pair<std::size_t, std::size_t> parse_pair(const std::string& text, const char* what) {
  const auto v = ris::parse_number_list(text);
  if (v.size() != 2 || v[0] < 0 || v[1] < 0 || v[0] != static_cast<std::size_t>(v[0]) ||
      v[1] != static_cast<std::size_t>(v[1])) {
    throw ris::ConfigError(std::string(what) + " takes two counts: intensity,threshold");
  }
  return {static_cast<std::size_t>(v[0]), static_cast<std::size_t>(v[1])};
}

json manifest(const char* command, const ris::RunConfig& c, std::uint64_t calls, double seconds) {
  return {{"format", "ris-run-manifest"},
          {"version", 1},
          {"command", command},
          {"seed", c.seed},
          {"config_hash", ris::config_hash(c)},
          {"calls", calls},
          {"wall_seconds", seconds},
          {"config", ris::to_json(c)}};
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string curve_name(double b) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "curve_b%.6g.csv", b);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relaxation-based importance sampling for rare events and fragility surfaces"};
  app.require_subcommand(1);

  CommonFlags ef;
  std::size_t reps = 1;
  std::string estimate_out;
  auto* estimate = app.add_subcommand("estimate", "estimate a failure probability");
  add_common(estimate, ef);
  estimate->add_option("--reps", reps, "replications");
  estimate->add_option("--out", estimate_out, "result JSON (a .manifest.json sidecar is written next to it)");

  CommonFlags ff;
  std::string ranges, grid_flag, dense_flag, curves_flag, fragility_out;
  auto* fragility = app.add_subcommand("fragility", "compute a fragility surface");
  add_common(fragility, ff);
  fragility->add_option("--ranges", ranges, "PGA_l,PGA_u,b_l,b_u (b may use a uy suffix)");
  fragility->add_option("--grid", grid_flag, "coarse nodes: intensity,threshold");
  fragility->add_option("--dense", dense_flag, "dense points: intensity,threshold");
  fragility->add_option("--curves", curves_flag, "thresholds to slice, e.g. 1uy,1.5uy,2uy, or none");
  fragility->add_option("--out", fragility_out, "output directory")->required();

  std::string suite = "table1", bench_out;
  std::uint64_t bench_seed = 1;
  std::size_t bench_reps = 0, bench_jobs = 0;
  auto* bench = app.add_subcommand("bench", "run a benchmark suite");
  bench->add_option("--suite", suite, "table1 | analytic")->check(CLI::IsMember({"table1", "analytic"}));
  bench->add_option("--out", bench_out, "CSV path");
  bench->add_option("--seed", bench_seed, "root seed");
  bench->add_option("--reps", bench_reps, "replications per row (default 100 for table1, 50 for analytic)");
  bench->add_option("--jobs", bench_jobs, "worker threads (0 = logical cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();
    if (*estimate) {
      ris::RunConfig c = resolve(estimate, ef);
      if (estimate->count("--reps")) c.reps = reps;
      const auto stats = ris::run_estimate(c);
      std::cout << ris::summary_text(c, stats);
      if (!estimate_out.empty()) {
        const json doc = {{"config", ris::to_json(c)}, {"config_hash", ris::config_hash(c)}, {"result", ris::to_json(stats)}};
        write_text(estimate_out, doc.dump(2) + "\n");
        std::uint64_t calls = 0;
        for (auto k : stats.calls) calls += k;
        write_text(estimate_out + ".manifest.json", manifest("estimate", c, calls, since(t0)).dump(2) + "\n");
      }
      return 0;
    }

    if (*fragility) {
      ris::RunConfig c = resolve(fragility, ff);
      if (!fragility->count("--method") && ff.config.empty()) c.method = "is1";
      const double uy = ris::yield_displacement(c.problem);
      if (!ranges.empty()) {
        const auto v = ris::parse_number_list(ranges, uy);
        if (v.size() != 4) throw ris::ConfigError("--ranges takes PGA_l,PGA_u,b_l,b_u");
        c.intensity_range = std::array<double, 2>{v[0], v[1]};
        c.threshold_range = std::array<double, 2>{v[2], v[3]};
      }
      if (!grid_flag.empty()) std::tie(c.grid_intensity, c.grid_threshold) = parse_pair(grid_flag, "--grid");
      if (!dense_flag.empty()) std::tie(c.dense_intensity, c.dense_threshold) = parse_pair(dense_flag, "--dense");
      if (fragility->count("--curves")) {
        c.curves = curves_flag == "none" ? std::vector<double>{} : ris::parse_number_list(curves_flag, uy);
      }
      c = ris::with_fragility_defaults(std::move(c));

      const auto run = ris::run_fragility(c);
      const fs::path dir(fragility_out);
      fs::create_directories(dir);
      ris::write_csv(run.surface, dir / "surface.csv");
      ris::write_json(run.surface, dir / "surface.json");
      json outputs = {"surface.csv", "surface.json"};
      for (const auto& curve : run.curves) {
        ris::write_csv(curve, dir / curve_name(curve.threshold));
        outputs.push_back(curve_name(curve.threshold));
      }
      json m = manifest("fragility", c, run.grid.calls, since(t0));
      m["outputs"] = outputs;
      m["warnings"] = run.grid.warnings;
      write_text(dir / "manifest.json", m.dump(2) + "\n");
      std::printf("%s surface %zux%zu coarse, %zux%zu dense, %llu limit-state calls, %zu warning(s)\n",
                  c.method.c_str(), run.grid.axes.columns(), run.grid.axes.rows(), run.surface.pga.size(),
                  run.surface.threshold.size(), static_cast<unsigned long long>(run.grid.calls),
                  run.grid.warnings.size());
      return 0;
    }

    const bool table1 = suite == "table1";
    const std::size_t r = bench_reps ? bench_reps : (table1 ? 100 : 50);
    const auto table = table1 ? ris::bench_table1(bench_seed, r, bench_jobs) : ris::bench_analytic(bench_seed, r, bench_jobs);
    const std::string csv = table.csv();
    if (bench_out.empty()) {
      std::cout << csv;
    } else {
      write_text(bench_out, csv);
    }
    std::size_t passed = 0;
    for (bool p : table.pass) passed += p ? 1 : 0;
    std::fprintf(stderr, "%s: %zu/%zu rows pass (%.1f s)\n", suite.c_str(), passed, table.pass.size(), since(t0));
    return table.all_pass() ? 0 : 1;
  } catch (const ris::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumericalExit;
  } catch (const ris::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigExit;
  } catch (const ris::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kConfigExit;
  } catch (const ris::RangeError& e) {
    std::fprintf(stderr, "out of range: %s\n", e.what());
    return kConfigExit;
  } catch (const ris::DomainError& e) {
    std::fprintf(stderr, "invalid value: %s\n", e.what());
    return kConfigExit;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
