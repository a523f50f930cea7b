#ifndef RIS_FAILURE_RATIO_HPP
#define RIS_FAILURE_RATIO_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ris {

enum class RatioBranch { low, high };

/// A failure ratio theta observed at sphere radius r.
struct RatioPoint {
  double radius = 0.0;
  double ratio = 0.0;
};

/// 1/2 I(1 - b^2 / r^2; (n-1)/2, 1/2): area fraction of the radius-r sphere in
/// a halfspace at distance b. Zero for r <= b.
double cap_ratio(double r, double b, std::size_t n);

/**
 * low:  theta(r) = 1/2 sum_k I(1 - (b_k / r)^2; (n-1)/2, 1/2)
 * high: theta(r) = 1 - 1/2 sum_k I(1 - (b_k / (a - r))^2; (n-1)/2, 1/2)
 * Values are clipped to [0, 1].
 */
struct FailureRatioModel {
  RatioBranch branch = RatioBranch::low;
  std::size_t dimension = 2;
  std::vector<double> radii;  // b_k
  double shift = 0.0;         // a, high branch only
  double residual = 0.0;      // sum of squared logit residuals of the fit

  std::size_t terms() const noexcept { return radii.size(); }
  double operator()(double r) const;
};

struct FitOptions {
  double clamp = 1e-12;  // theta is clipped to [clamp, 1 - clamp] before the logit
  std::size_t max_terms = 3;
};

/**
 * Least squares in logit space over the b_k (and a > max radius for the high
 * branch) by Nelder-Mead. K runs over 1..max_terms as far as the points
 * determine the parameters; the smallest K whose residual is within 5% of the
 * best is kept. Throws FitError when even K = 1 is under-determined.
 */
FailureRatioModel fit_failure_ratio(std::span<const RatioPoint> points, RatioBranch branch, std::size_t n,
                                    const FitOptions& options = {});

/// Fit with a fixed number of terms.
FailureRatioModel fit_failure_ratio_terms(std::span<const RatioPoint> points, RatioBranch branch, std::size_t n,
                                          std::size_t terms, const FitOptions& options = {});

/**
 * Failure ratio over a whole radius range: a single branch when all data sit
 * on one side of 1/2, otherwise low and high fits blended in logit space
 * across the radii separating the two groups.
 */
class FailureRatioCurve {
 public:
  FailureRatioCurve() = default;
  static FailureRatioCurve fit(std::span<const RatioPoint> points, std::size_t n, const FitOptions& options = {});

  double operator()(double r) const;
  bool has_low() const noexcept { return has_low_; }
  bool has_high() const noexcept { return has_high_; }
  const FailureRatioModel& low() const noexcept { return low_; }
  const FailureRatioModel& high() const noexcept { return high_; }
  double ramp_begin() const noexcept { return ramp_begin_; }
  double ramp_end() const noexcept { return ramp_end_; }

 private:
  FailureRatioModel low_, high_;
  bool has_low_ = false, has_high_ = false;
  double ramp_begin_ = 0.0, ramp_end_ = 0.0;
};

/**
 * Solves theta(xi R) = rho theta(xi_current R) for xi in [1, xi_current) by
 * bisection in log xi, returning 1 when theta(R) already reaches the target.
 * Throws ContractViolation if theta(xi_current R) = 0 and ConfigError unless
 * 0 < rho < 1.
 */
double extrapolate_xi(const std::function<double(double)>& theta, double xi_current, double rho, double R);
double extrapolate_xi(const FailureRatioModel& model, double xi_current, double rho, double R);

}  // namespace ris

#endif  // RIS_FAILURE_RATIO_HPP
