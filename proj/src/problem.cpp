#include "ris/problem.hpp"

#include <cmath>

#include "ris/distributions.hpp"
#include "ris/errors.hpp"

namespace ris {

ReliabilityProblem::ReliabilityProblem(std::string name, std::size_t dimension, LimitState limit_state)
    : name_(std::move(name)),
      dimension_(dimension),
      limit_state_(std::make_shared<const LimitState>(std::move(limit_state))) {
  if (dimension_ == 0) throw ConfigError("problem dimension must be positive");
  if (!*limit_state_) throw ConfigError("problem requires a limit-state function");
}

ReliabilityProblem::ReliabilityProblem(const ReliabilityProblem& other)
    : name_(other.name_), dimension_(other.dimension_), limit_state_(other.limit_state_), calls_(other.calls()) {}

ReliabilityProblem& ReliabilityProblem::operator=(const ReliabilityProblem& other) {
  if (this != &other) {
    name_ = other.name_;
    dimension_ = other.dimension_;
    limit_state_ = other.limit_state_;
    calls_.store(other.calls(), std::memory_order_relaxed);
  }
  return *this;
}

double ReliabilityProblem::operator()(std::span<const double> x) const {
  if (x.size() != dimension_) {
    throw DomainError("limit state '" + name_ + "' expects dimension " + std::to_string(dimension_) + ", got " +
                      std::to_string(x.size()));
  }
  calls_.fetch_add(1, std::memory_order_relaxed);
  return (*limit_state_)(x);
}

ReliabilityProblem ReliabilityProblem::fresh() const {
  ReliabilityProblem copy(*this);
  copy.reset_calls();
  return copy;
}

double parabolic_lsf(std::span<const double> x, double d) {
  if (x.size() != 2) throw DomainError("parabolic_lsf expects a 2-vector");
  const double shifted = x[0] - 0.1;
  return d - x[1] - 0.5 * shifted * shifted;
}

double linear_lsf(std::span<const double> x, double beta, std::span<const double> direction) {
  if (x.size() != direction.size()) throw DomainError("linear_lsf: dimension mismatch");
  if (std::fabs(squared_norm(direction) - 1.0) > 1e-10) throw DomainError("linear_lsf: direction must be a unit vector");
  return beta - dot(direction, x);
}

ReliabilityProblem make_parabolic_problem(double d) {
  return ReliabilityProblem("parabolic", 2, [d](std::span<const double> x) { return parabolic_lsf(x, d); });
}

ReliabilityProblem make_linear_problem(double beta, std::size_t n) {
  return make_linear_problem(beta, std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n))));
}

ReliabilityProblem make_linear_problem(double beta, std::vector<double> direction) {
  if (direction.empty()) throw ConfigError("linear problem needs a direction");
  if (std::fabs(squared_norm(direction) - 1.0) > 1e-10) throw DomainError("linear problem: direction must be a unit vector");
  const std::size_t n = direction.size();
  auto e = std::make_shared<const std::vector<double>>(std::move(direction));
  return ReliabilityProblem("linear", n, [beta, e](std::span<const double> x) { return beta - dot(*e, x); });
}

}  // namespace ris
