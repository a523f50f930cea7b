#include "ris/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ris/errors.hpp"

namespace ris {

void fill_normal(std::span<double> out, RandomStream& rng) noexcept {
  for (double& v : out) v = rng.normal();
}

std::vector<double> sample_standard_normal(std::size_t n, RandomStream& rng) {
  std::vector<double> x(n);
  fill_normal(x, rng);
  return x;
}

std::vector<double> sample_uniform_sphere(std::size_t n, RandomStream& rng) {
  if (n < 2) throw DomainError("sample_uniform_sphere: dimension must be at least 2");
  std::vector<double> u(n);
  double norm2 = 0.0;
  while (norm2 == 0.0) {
    fill_normal(u, rng);
    norm2 = squared_norm(u);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& v : u) v *= inv;
  return u;
}

double chi_log_pdf(double r, std::size_t n) {
  if (n == 0) throw DomainError("chi_log_pdf: degrees of freedom must be positive");
  if (!(r > 0.0)) return -std::numeric_limits<double>::infinity();
  const double k = static_cast<double>(n);
  return (k - 1.0) * std::log(r) - 0.5 * r * r - (0.5 * k - 1.0) * std::numbers::ln2 - std::lgamma(0.5 * k);
}

double sample_chi(std::size_t n, RandomStream& rng) {
  if (n == 0) throw DomainError("sample_chi: degrees of freedom must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z * z;
  }
  return std::sqrt(sum);
}

double scaled_gaussian_log_pdf(std::span<const double> x, double xi) {
  if (!(xi > 0.0)) throw DomainError("scaled_gaussian_log_pdf: scale must be positive");
  const double n = static_cast<double>(x.size());
  return -n * (std::log(xi) + 0.5 * std::log(2.0 * std::numbers::pi)) - squared_norm(x) / (2.0 * xi * xi);
}

double scaled_gaussian_log_ratio(double squared_norm, std::size_t n, double xi_new, double xi_old) noexcept {
  return static_cast<double>(n) * std::log(xi_old / xi_new) -
         0.5 * squared_norm * (1.0 / (xi_new * xi_new) - 1.0 / (xi_old * xi_old));
}

double squared_norm(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace ris
