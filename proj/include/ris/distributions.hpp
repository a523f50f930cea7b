#ifndef RIS_DISTRIBUTIONS_HPP
#define RIS_DISTRIBUTIONS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "ris/random.hpp"

namespace ris {

/// Fills `out` with independent standard normals.
void fill_normal(std::span<double> out, RandomStream& rng) noexcept;

std::vector<double> sample_standard_normal(std::size_t n, RandomStream& rng);

/// Uniform draw on the unit sphere S^{n-1}. Requires n >= 2.
std::vector<double> sample_uniform_sphere(std::size_t n, RandomStream& rng);

/// Log-density of the chi distribution with n degrees of freedom; -inf for r <= 0.
double chi_log_pdf(double r, std::size_t n);

/// Radius of an n-vector of independent standard normals.
double sample_chi(std::size_t n, RandomStream& rng);

/// Log-density of N(0, xi^2 I) at x. Throws DomainError unless xi > 0.
double scaled_gaussian_log_pdf(std::span<const double> x, double xi);

/// log f(x; xi_new^2 I) - log f(x; xi_old^2 I), given ||x||^2.
double scaled_gaussian_log_ratio(double squared_norm, std::size_t n, double xi_new, double xi_old) noexcept;

double squared_norm(std::span<const double> x) noexcept;
double dot(std::span<const double> a, std::span<const double> b) noexcept;

}  // namespace ris

#endif  // RIS_DISTRIBUTIONS_HPP
