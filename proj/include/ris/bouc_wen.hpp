#ifndef RIS_BOUC_WEN_HPP
#define RIS_BOUC_WEN_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace ris {

/// Single-degree-of-freedom oscillator with Bouc-Wen hysteresis. Defaults are
/// the benchmark structure (yield displacement 1.25 mm).
struct BoucWenParams {
  double mass = 3.0e5;        // kg
  double damping = 5.0e7;     // N s / m
  double stiffness = 3.0e7;   // N / m
  double alpha = 0.1;         // post-yield stiffness ratio
  double phi = 1.0;
  double varphi = 400.0;      // 1 / m
  double psi = 400.0;         // 1 / m
  double gamma = 1.0;

  /// (varphi + psi)^(-1 / gamma)
  double yield_displacement() const;

  /// Throws DomainError for non-physical parameters.
  void validate() const;
};

struct ResponseHistory {
  double dt = 0.0;
  std::vector<double> displacement;
  std::vector<double> velocity;
  std::vector<double> hysteretic;
};

/**
 * Integrates m u'' + c u' + alpha k u + (1 - alpha) k z = -m a_g(t) coupled with
 * the Bouc-Wen law for z, from rest, with classical RK4. The excitation is
 * sampled every `dt` seconds and linearly interpolated inside an interval;
 * each interval is covered by `substeps` RK4 steps. The history is reported at
 * the excitation sample times.
 *
 * Throws DomainError if dt / substeps > 0.01 s, IntegrationError on a
 * non-finite state.
 */
ResponseHistory integrate_bouc_wen(const BoucWenParams& params, std::span<const double> ground_acceleration, double dt,
                                   std::size_t substeps = 1);

/// max_t |u(t)| over every integration step, without storing the history.
double peak_displacement(const BoucWenParams& params, std::span<const double> ground_acceleration, double dt,
                         std::size_t substeps = 1);

}  // namespace ris

#endif  // RIS_BOUC_WEN_HPP
