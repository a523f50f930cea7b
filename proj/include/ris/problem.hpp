#ifndef RIS_PROBLEM_HPP
#define RIS_PROBLEM_HPP

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ris {

/**
 * A limit-state function G over the n-dimensional standard normal space,
 * together with a counter of its evaluations. Failure is G(x) <= 0.
 *
 * Copies share the limit-state callable but carry their own counter, which
 * starts from the value of the source.
 */
class ReliabilityProblem {
 public:
  using LimitState = std::function<double(std::span<const double>)>;

  ReliabilityProblem(std::string name, std::size_t dimension, LimitState limit_state);
  ReliabilityProblem(const ReliabilityProblem& other);
  ReliabilityProblem& operator=(const ReliabilityProblem& other);

  /// Evaluates G(x) and increments the call counter by one.
  double operator()(std::span<const double> x) const;

  std::size_t dimension() const noexcept { return dimension_; }
  const std::string& name() const noexcept { return name_; }
  std::uint64_t calls() const noexcept { return calls_.load(std::memory_order_relaxed); }
  void reset_calls() noexcept { calls_.store(0, std::memory_order_relaxed); }

  /// Copy with a zeroed counter.
  ReliabilityProblem fresh() const;

 private:
  std::string name_;
  std::size_t dimension_;
  std::shared_ptr<const LimitState> limit_state_;
  mutable std::atomic<std::uint64_t> calls_{0};
};

/// d - x2 - 0.5 (x1 - 0.1)^2. Throws DomainError unless x has two entries.
double parabolic_lsf(std::span<const double> x, double d);

/// beta - e . x. Throws DomainError unless ||e|| = 1 and sizes agree.
double linear_lsf(std::span<const double> x, double beta, std::span<const double> direction);

ReliabilityProblem make_parabolic_problem(double d);

/// Halfspace problem along the diagonal direction (1, ..., 1) / sqrt(n).
ReliabilityProblem make_linear_problem(double beta, std::size_t n);
ReliabilityProblem make_linear_problem(double beta, std::vector<double> direction);

}  // namespace ris

#endif  // RIS_PROBLEM_HPP
