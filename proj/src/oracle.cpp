#include "ris/oracle.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "ris/distributions.hpp"
#include "ris/errors.hpp"
#include "ris/failure_ratio.hpp"
#include "ris/parallel.hpp"
#include "ris/special.hpp"

namespace ris {
namespace {

constexpr std::size_t kBatch = 4096;

DirectMcResult summarize(std::uint64_t hits, std::uint64_t samples) {
  DirectMcResult r;
  r.samples = samples;
  r.hits = hits;
  r.probability = static_cast<double>(hits) / static_cast<double>(samples);
  r.zero_hits = hits == 0;
  r.cov = r.zero_hits ? std::numeric_limits<double>::quiet_NaN()
                      : std::sqrt((1.0 - r.probability) / (static_cast<double>(samples) * r.probability));
  return r;
}

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double DirectMcResult::standard_error() const noexcept {
  if (samples == 0) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(probability * (1.0 - probability) / static_cast<double>(samples));
}

std::vector<DirectMcResult> direct_mc_thresholds(const ReliabilityProblem& problem, std::size_t samples,
                                                 const RandomStream& rng, double scale,
                                                 std::span<const double> thresholds, std::size_t jobs) {
  if (samples == 0) throw ConfigError("direct Monte Carlo needs at least one sample");
  if (!(scale > 0.0)) throw ConfigError("direct Monte Carlo: scale must be positive");
  const std::size_t batches = (samples + kBatch - 1) / kBatch;
  const std::size_t t = thresholds.size();
  std::vector<std::uint64_t> hits(batches * t, 0);
  parallel_for(batches, jobs, [&](std::size_t b) {
    RandomStream stream = rng.substream(b);
    std::vector<double> x(problem.dimension());
    const std::size_t count = std::min(kBatch, samples - b * kBatch);
    for (std::size_t k = 0; k < count; ++k) {
      fill_normal(x, stream);
      if (scale != 1.0)
        for (double& v : x) v *= scale;
      const double g = problem(x);
      for (std::size_t m = 0; m < t; ++m) hits[b * t + m] += g <= thresholds[m] ? 1 : 0;
    }
  });
  std::vector<DirectMcResult> out;
  for (std::size_t m = 0; m < t; ++m) {
    std::uint64_t total = 0;
    for (std::size_t b = 0; b < batches; ++b) total += hits[b * t + m];
    out.push_back(summarize(total, samples));
  }
  return out;
}

DirectMcResult direct_mc(const ReliabilityProblem& problem, std::size_t samples, const RandomStream& rng, double scale,
                         double threshold, std::size_t jobs) {
  const double th[] = {threshold};
  return direct_mc_thresholds(problem, samples, rng, scale, th, jobs).front();
}

double halfspace_probability(double beta) { return normal_cdf(-beta); }

double scaled_linear_surface(double eps, double xi, double beta) {
  if (!(xi > 0.0)) throw DomainError("scaled_linear_surface: xi must be positive");
  return normal_cdf((eps - beta) / xi);
}

double halfspace_cap_ratio(double r, double beta, std::size_t n) {
  if (n < 2) throw DomainError("halfspace_cap_ratio: n must be at least 2");
  if (!(r > 0.0)) throw DomainError("halfspace_cap_ratio: r must be positive");
  if (beta < 0.0) return 1.0 - cap_ratio(r, -beta, n);
  return cap_ratio(r, beta, n);
}

double analytic_oracle(std::string_view case_id, std::span<const double> args) {
  auto need = [&](std::size_t k) {
    if (args.size() != k) {
      throw ConfigError("oracle case " + std::string(case_id) + " takes " + std::to_string(k) + " arguments");
    }
  };
  if (case_id == "linear-halfspace") {
    need(1);
    return halfspace_probability(args[0]);
  }
  if (case_id == "scaled-linear-surface") {
    need(3);
    return scaled_linear_surface(args[0], args[1], args[2]);
  }
  if (case_id == "halfspace-cap-ratio") {
    need(3);
    if (!(args[2] >= 2.0) || args[2] != std::floor(args[2])) throw ConfigError("cap ratio: n must be an integer >= 2");
    return halfspace_cap_ratio(args[0], args[1], static_cast<std::size_t>(args[2]));
  }
  throw ConfigError("unknown oracle case '" + std::string(case_id) + "'");
}

double parabolic_probability(double d) {
  const auto f = [d](double x1) {
    const double phi = std::exp(-0.5 * x1 * x1) / std::sqrt(2.0 * std::numbers::pi);
    return phi * normal_cdf(0.5 * (x1 - 0.1) * (x1 - 0.1) - d);
  };
  // split near the two humps so the coarse first pass sees both
  const double s = std::sqrt(2.0 * std::max(d, 0.0)) + 0.1;
  double total = 0.0;
  const double cuts[] = {-40.0, -s, 0.1, s + 0.2, 40.0};
  for (int k = 0; k < 4; ++k) {
    const double lo = cuts[k], hi = cuts[k + 1];
    const double flo = f(lo), fhi = f(hi), fmid = f(0.5 * (lo + hi));
    total += simpson(f, lo, hi, flo, fmid, fhi, (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi), 1e-17, 50);
  }
  return total;
}

}  // namespace ris
