#pragma once

#include <stdexcept>
#include <string>

namespace freelunch {

// Argument outside an operation's domain (negative lag, bad interval, ...).
class DomainError : public std::invalid_argument {
public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// κ(θ) requested on a kernel that is not of the form K(t,s) = κ(t−s).
class NonDifferenceKernel : public DomainError {
public:
  explicit NonDifferenceKernel(const std::string& what) : DomainError(what) {}
};

// Paired containers disagree in length.
class LengthMismatch : public DomainError {
public:
  explicit LengthMismatch(const std::string& what) : DomainError(what) {}
};

// Invalid or inconsistent run configuration.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive quadrature could not reach the requested tolerance.
class QuadratureFailure : public std::runtime_error {
public:
  explicit QuadratureFailure(const std::string& what) : std::runtime_error(what) {}
};

// Integrand detected as non-integrable on the requested interval.
class DivergentIntegral : public std::runtime_error {
public:
  explicit DivergentIntegral(const std::string& what) : std::runtime_error(what) {}
};

// ∂K/∂t requested at a point where the kernel derivative blows up.
class SingularDerivative : public DomainError {
public:
  explicit SingularDerivative(const std::string& what) : DomainError(what) {}
};

// A kernel value needed by a formula is infinite at the requested point.
class SingularKernelValue : public DomainError {
public:
  explicit SingularKernelValue(const std::string& what) : DomainError(what) {}
};

// Price-map argument outside the map's domain.
class PriceMapDomainError : public DomainError {
public:
  explicit PriceMapDomainError(const std::string& what) : DomainError(what) {}
};

// Exhaustive enumeration would exceed the configured outcome cap.
class EnumerationTooLarge : public std::runtime_error {
public:
  explicit EnumerationTooLarge(const std::string& what) : std::runtime_error(what) {}
};

// A detector's standing hypothesis fails; carries the hypothesis name.
class HypothesisViolated : public std::runtime_error {
public:
  HypothesisViolated(std::string hypothesis, const std::string& what)
      : std::runtime_error(what), hypothesis_(std::move(hypothesis)) {}
  const std::string& hypothesis() const noexcept { return hypothesis_; }

private:
  std::string hypothesis_;
};

} // namespace freelunch
