#include "ris/failure_ratio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ris/errors.hpp"
#include "ris/special.hpp"

namespace ris {
namespace {

struct Minimum {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
};

// Plain Nelder-Mead with the usual coefficients.
Minimum nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> start, double scale,
                    std::size_t max_evals = 4000, double tol = 1e-15) {
  const std::size_t d = start.size();
  std::vector<std::vector<double>> simplex(d + 1, start);
  for (std::size_t i = 0; i < d; ++i) simplex[i + 1][i] += scale;
  std::vector<double> values(d + 1);
  for (std::size_t i = 0; i <= d; ++i) values[i] = f(simplex[i]);
  std::size_t evals = d + 1;

  std::vector<std::size_t> order(d + 1);
  std::vector<double> centroid(d), trial(d), trial2(d);
  auto point = [&](double t, std::vector<double>& out, std::size_t worst) {
    for (std::size_t k = 0; k < d; ++k) out[k] = centroid[k] + t * (simplex[worst][k] - centroid[k]);
  };
  while (evals < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[d - 1];
    if (std::fabs(values[worst] - values[best]) <= tol * (std::fabs(values[best]) + tol)) {
      double spread = 0.0;
      for (std::size_t i = 0; i <= d; ++i)
        for (std::size_t k = 0; k < d; ++k) spread = std::max(spread, std::fabs(simplex[i][k] - simplex[best][k]));
      if (spread < 1e-10) break;
    }
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < d; ++k) centroid[k] += simplex[i][k] / static_cast<double>(d);
    }
    point(-1.0, trial, worst);
    const double fr = f(trial);
    ++evals;
    if (fr < values[best]) {
      point(-2.0, trial2, worst);
      const double fe = f(trial2);
      ++evals;
      if (fe < fr) {
        simplex[worst] = trial2;
        values[worst] = fe;
      } else {
        simplex[worst] = trial;
        values[worst] = fr;
      }
    } else if (fr < values[second]) {
      simplex[worst] = trial;
      values[worst] = fr;
    } else {
      const bool outside = fr < values[worst];
      point(outside ? -0.5 : 0.5, trial2, worst);
      const double fc = f(trial2);
      ++evals;
      if (fc < (outside ? fr : values[worst])) {
        simplex[worst] = trial2;
        values[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= d; ++i) {
          if (i == best) continue;
          for (std::size_t k = 0; k < d; ++k) simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
          values[i] = f(simplex[i]);
          ++evals;
        }
      }
    }
  }
  const auto it = std::min_element(values.begin(), values.end());
  return {simplex[static_cast<std::size_t>(it - values.begin())], *it};
}

double logit(double p, double clamp) {
  p = std::clamp(p, clamp, 1.0 - clamp);
  return std::log(p) - std::log1p(-p);
}

// b with cap_ratio(r, b, n) = target, target in (0, 1/2).
double invert_cap(double r, double target, std::size_t n) {
  if (target >= 0.5) return 1e-6 * r;
  if (target <= 0.0) return r;
  double lo = 0.0, hi = r;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cap_ratio(r, mid, n) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double median_of(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
  return v[v.size() / 2];
}

struct Problem {
  std::span<const RatioPoint> points;
  RatioBranch branch;
  std::size_t n;
  std::size_t terms;
  double clamp;
  double r_max;
  bool fixed_shift;
  double shift;

  FailureRatioModel decode(std::span<const double> p) const {
    FailureRatioModel m;
    m.branch = branch;
    m.dimension = n;
    for (std::size_t k = 0; k < terms; ++k) m.radii.push_back(std::exp(p[k]));
    if (branch == RatioBranch::high) m.shift = fixed_shift ? shift : r_max + std::exp(p[terms]);
    return m;
  }

  double residual(const FailureRatioModel& m) const {
    double ss = 0.0;
    for (const auto& pt : points) {
      const double e = logit(m(pt.radius), clamp) - logit(pt.ratio, clamp);
      ss += e * e;
    }
    return ss;
  }

  std::size_t parameters() const { return terms + (branch == RatioBranch::high && !fixed_shift ? 1 : 0); }
};

FailureRatioModel fit_with(const Problem& prob) {
  std::vector<double> radii, ratios;
  for (const auto& p : prob.points) {
    radii.push_back(p.radius);
    ratios.push_back(p.ratio);
  }
  const double r_med = median_of(radii);
  const double t_med = median_of(ratios);

  std::vector<double> start;
  double a0 = prob.shift;
  if (prob.branch == RatioBranch::high && !prob.fixed_shift) a0 = 2.0 * prob.r_max;
  for (std::size_t k = 0; k < prob.terms; ++k) {
    const double share = (prob.branch == RatioBranch::low ? t_med : 1.0 - t_med) / static_cast<double>(prob.terms);
    const double at = prob.branch == RatioBranch::low ? r_med : std::max(a0 - r_med, 1e-6);
    const double b = invert_cap(at, share, prob.n) * (1.0 + 0.1 * static_cast<double>(k));
    start.push_back(std::log(std::max(b, 1e-8)));
  }
  if (prob.branch == RatioBranch::high && !prob.fixed_shift) start.push_back(std::log(std::max(a0 - prob.r_max, 1e-6)));

  auto objective = [&](std::span<const double> p) {
    for (double v : p)
      if (!std::isfinite(v) || v > 50.0 || v < -50.0) return std::numeric_limits<double>::infinity();
    return prob.residual(prob.decode(p));
  };
  Minimum best = nelder_mead(objective, start, 0.2);
  for (int restart = 0; restart < 3; ++restart) {
    Minimum again = nelder_mead(objective, best.x, 0.05);
    if (again.value >= best.value - 1e-15) {
      best = again.value < best.value ? again : best;
      break;
    }
    best = again;
  }
  FailureRatioModel model = prob.decode(best.x);
  std::sort(model.radii.begin(), model.radii.end());
  model.residual = best.value;
  return model;
}

void check_points(std::span<const RatioPoint> points, std::size_t n) {
  if (n < 2) throw ConfigError("failure-ratio model needs dimension >= 2");
  if (points.empty()) throw FitError("failure-ratio fit: no data points");
  for (const auto& p : points) {
    if (!(p.radius > 0.0) || !(p.ratio >= 0.0 && p.ratio <= 1.0)) {
      throw ConfigError("failure-ratio fit: radii must be positive and ratios in [0, 1]");
    }
  }
}

double max_radius(std::span<const RatioPoint> points) {
  double r = 0.0;
  for (const auto& p : points) r = std::max(r, p.radius);
  return r;
}

}  // namespace

double cap_ratio(double r, double b, std::size_t n) {
  if (!(r > b)) return 0.0;
  if (b <= 0.0) return 0.5;
  const double q = b / r;
  return 0.5 * regularized_incomplete_beta(1.0 - q * q, 0.5 * static_cast<double>(n - 1), 0.5);
}

double FailureRatioModel::operator()(double r) const {
  double sum = 0.0;
  if (branch == RatioBranch::low) {
    for (double b : radii) sum += cap_ratio(r, b, dimension);
    return std::clamp(sum, 0.0, 1.0);
  }
  const double gap = shift - r;
  if (gap > 0.0) {
    for (double b : radii) sum += cap_ratio(gap, b, dimension);
  }
  return std::clamp(1.0 - sum, 0.0, 1.0);
}

FailureRatioModel fit_failure_ratio_terms(std::span<const RatioPoint> points, RatioBranch branch, std::size_t n,
                                          std::size_t terms, const FitOptions& options) {
  check_points(points, n);
  if (terms == 0) throw ConfigError("failure-ratio fit: at least one term");
  Problem prob{points, branch, n, terms, options.clamp, max_radius(points), false, 0.0};
  if (prob.parameters() > points.size()) {
    throw FitError("failure-ratio fit is under-determined: " + std::to_string(points.size()) + " points for " +
                   std::to_string(prob.parameters()) + " parameters");
  }
  return fit_with(prob);
}

FailureRatioModel fit_failure_ratio(std::span<const RatioPoint> points, RatioBranch branch, std::size_t n,
                                    const FitOptions& options) {
  check_points(points, n);
  std::vector<FailureRatioModel> fits;
  for (std::size_t k = 1; k <= std::max<std::size_t>(options.max_terms, 1); ++k) {
    const std::size_t params = k + (branch == RatioBranch::high ? 1 : 0);
    if (params > points.size()) break;
    fits.push_back(fit_failure_ratio_terms(points, branch, n, k, options));
  }
  if (fits.empty()) {
    throw FitError("failure-ratio fit is under-determined even with one term (" + std::to_string(points.size()) +
                   " points)");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : fits) best = std::min(best, f.residual);
  for (const auto& f : fits) {
    if (f.residual <= 1.05 * best + 1e-10) return f;
  }
  return fits.front();
}

FailureRatioCurve FailureRatioCurve::fit(std::span<const RatioPoint> points, std::size_t n, const FitOptions& options) {
  check_points(points, n);
  std::vector<RatioPoint> low, high;
  for (const auto& p : points) {
    if (p.ratio <= 0.5) low.push_back(p);
    if (p.ratio >= 0.5) high.push_back(p);
  }
  FailureRatioCurve curve;
  if (!low.empty()) {
    curve.low_ = fit_failure_ratio(low, RatioBranch::low, n, options);
    curve.has_low_ = true;
  }
  if (!high.empty()) {
    if (high.size() >= 2) {
      curve.high_ = fit_failure_ratio(high, RatioBranch::high, n, options);
    } else {
      // one point cannot place a; mirror the cap about a = 2r
      const double r = high.front().radius;
      Problem prob{high, RatioBranch::high, n, 1, options.clamp, r, true, 2.0 * r};
      curve.high_ = fit_with(prob);
    }
    curve.has_high_ = true;
  }
  if (curve.has_low_ && curve.has_high_) {
    double lo_edge = 0.0, hi_edge = std::numeric_limits<double>::infinity();
    for (const auto& p : low) lo_edge = std::max(lo_edge, p.radius);
    for (const auto& p : high) hi_edge = std::min(hi_edge, p.radius);
    curve.ramp_begin_ = std::min(lo_edge, hi_edge);
    curve.ramp_end_ = std::max(lo_edge, hi_edge);
  }
  return curve;
}

double FailureRatioCurve::operator()(double r) const {
  if (has_low_ && !has_high_) return low_(r);
  if (has_high_ && !has_low_) return high_(r);
  if (!has_low_) return 0.0;
  double w;
  if (ramp_end_ > ramp_begin_) {
    w = std::clamp((r - ramp_begin_) / (ramp_end_ - ramp_begin_), 0.0, 1.0);
  } else {
    w = r < ramp_begin_ ? 0.0 : 1.0;
  }
  if (w == 0.0) return low_(r);
  if (w == 1.0) return high_(r);
  constexpr double kTiny = 1e-300;
  const double lo = std::clamp(low_(r), kTiny, 1.0 - 1e-16);
  const double hi = std::clamp(high_(r), kTiny, 1.0 - 1e-16);
  const double z = (1.0 - w) * (std::log(lo) - std::log1p(-lo)) + w * (std::log(hi) - std::log1p(-hi));
  return 1.0 / (1.0 + std::exp(-z));
}

double extrapolate_xi(const std::function<double(double)>& theta, double xi_current, double rho, double R) {
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("extrapolate_xi: rho must lie in (0, 1)");
  if (!(xi_current >= 1.0) || !(R > 0.0)) throw ConfigError("extrapolate_xi: need xi_current >= 1 and R > 0");
  const double current = theta(xi_current * R);
  if (!(current > 0.0)) throw ContractViolation("extrapolate_xi: model predicts a zero failure ratio at the current xi");
  const double target = rho * current;
  if (theta(R) >= target) return 1.0;
  double lo = 0.0, hi = std::log(xi_current);  // theta below target at lo, above at hi
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (theta(std::exp(mid) * R) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

double extrapolate_xi(const FailureRatioModel& model, double xi_current, double rho, double R) {
  return extrapolate_xi([&model](double r) { return model(r); }, xi_current, rho, R);
}

}  // namespace ris
