#include "ris/bouc_wen.hpp"

#include <algorithm>
#include <cmath>

#include "ris/errors.hpp"

namespace ris {
namespace {

struct State {
  double u, v, z;
};

class Rates {
 public:
  explicit Rates(const BoucWenParams& p)
      : c_over_m_(p.damping / p.mass),
        elastic_(p.alpha * p.stiffness / p.mass),
        hysteretic_((1.0 - p.alpha) * p.stiffness / p.mass),
        phi_(p.phi),
        varphi_(p.varphi),
        psi_(p.psi),
        gamma_(p.gamma),
        unit_exponent_(p.gamma == 1.0) {}

  State operator()(const State& s, double ground) const {
    const double abs_z = std::fabs(s.z);
    const double z_pow = unit_exponent_ ? abs_z : std::pow(abs_z, gamma_);
    const double signed_z_pow = s.z < 0.0 ? -z_pow : z_pow;
    return {s.v, -c_over_m_ * s.v - elastic_ * s.u - hysteretic_ * s.z - ground,
            phi_ * s.v - varphi_ * std::fabs(s.v) * signed_z_pow - psi_ * s.v * z_pow};
  }

 private:
  double c_over_m_, elastic_, hysteretic_, phi_, varphi_, psi_, gamma_;
  bool unit_exponent_;
};

// Observer is called once per excitation sample with (index, state), and
// on_step once per RK4 step.
template <typename Observer, typename StepObserver>
void integrate(const BoucWenParams& params, std::span<const double> accel, double dt, std::size_t substeps,
               Observer&& on_sample, StepObserver&& on_step) {
  params.validate();
  if (substeps == 0) throw DomainError("integrate_bouc_wen: substeps must be positive");
  if (!(dt > 0.0)) throw DomainError("integrate_bouc_wen: time step must be positive");
  const double h = dt / static_cast<double>(substeps);
  if (h > 0.01 + 1e-15) throw DomainError("integrate_bouc_wen: integration step must not exceed 0.01 s");
  if (accel.empty()) return;

  const Rates rates(params);
  State s{0.0, 0.0, 0.0};
  on_sample(std::size_t{0}, s);
  std::size_t step = 0;
  for (std::size_t k = 0; k + 1 < accel.size(); ++k) {
    const double a0 = accel[k];
    const double slope = accel[k + 1] - accel[k];
    for (std::size_t sub = 0; sub < substeps; ++sub) {
      const double f0 = static_cast<double>(sub) / static_cast<double>(substeps);
      const double f1 = static_cast<double>(sub + 1) / static_cast<double>(substeps);
      const double g_start = a0 + slope * f0;
      const double g_mid = a0 + slope * 0.5 * (f0 + f1);
      const double g_end = a0 + slope * f1;

      const State k1 = rates(s, g_start);
      const State k2 = rates({s.u + 0.5 * h * k1.u, s.v + 0.5 * h * k1.v, s.z + 0.5 * h * k1.z}, g_mid);
      const State k3 = rates({s.u + 0.5 * h * k2.u, s.v + 0.5 * h * k2.v, s.z + 0.5 * h * k2.z}, g_mid);
      const State k4 = rates({s.u + h * k3.u, s.v + h * k3.v, s.z + h * k3.z}, g_end);
      s.u += h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
      s.v += h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
      s.z += h / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z);
      ++step;
      if (!std::isfinite(s.u) || !std::isfinite(s.v) || !std::isfinite(s.z)) {
        throw IntegrationError(step, static_cast<double>(step) * h);
      }
      on_step(s);
    }
    on_sample(k + 1, s);
  }
}

}  // namespace

double BoucWenParams::yield_displacement() const { return std::pow(varphi + psi, -1.0 / gamma); }

void BoucWenParams::validate() const {
  if (!(mass > 0.0) || !(stiffness > 0.0) || !(damping >= 0.0))
    throw DomainError("Bouc-Wen: mass and stiffness must be positive, damping non-negative");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("Bouc-Wen: alpha must lie in [0, 1]");
  if (!(varphi + psi > 0.0)) throw DomainError("Bouc-Wen: varphi + psi must be positive");
  if (!(gamma > 0.0)) throw DomainError("Bouc-Wen: gamma must be positive");
}

ResponseHistory integrate_bouc_wen(const BoucWenParams& params, std::span<const double> ground_acceleration,
                                   double dt, std::size_t substeps) {
  ResponseHistory out;
  out.dt = dt;
  out.displacement.resize(ground_acceleration.size());
  out.velocity.resize(ground_acceleration.size());
  out.hysteretic.resize(ground_acceleration.size());
  integrate(
      params, ground_acceleration, dt, substeps,
      [&](std::size_t k, const State& s) {
        out.displacement[k] = s.u;
        out.velocity[k] = s.v;
        out.hysteretic[k] = s.z;
      },
      [](const State&) {});
  return out;
}

double peak_displacement(const BoucWenParams& params, std::span<const double> ground_acceleration, double dt,
                         std::size_t substeps) {
  double peak = 0.0;
  integrate(
      params, ground_acceleration, dt, substeps, [](std::size_t, const State&) {},
      [&](const State& s) { peak = std::max(peak, std::fabs(s.u)); });
  return peak;
}

}  // namespace ris
