#ifndef RIS_SPECIAL_HPP
#define RIS_SPECIAL_HPP

namespace ris {

/// Standard normal CDF through erfc; saturates to 0/1 and accepts +-inf.
double normal_cdf(double x) noexcept;

/// log of the standard normal CDF, finite far into the lower tail.
double log_normal_cdf(double x) noexcept;

/// Inverse standard normal CDF. Throws DomainError unless 0 < p < 1.
double normal_inv_cdf(double p);

/// Regularized incomplete beta I_x(a, b). Throws DomainError for x outside
/// [0, 1] or non-positive shape parameters.
double regularized_incomplete_beta(double x, double a, double b);

/// log I_x(a, b); -inf at x = 0.
double log_regularized_incomplete_beta(double x, double a, double b);

}  // namespace ris

#endif  // RIS_SPECIAL_HPP
