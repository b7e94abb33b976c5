#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ephydro {

/// Argument outside the mathematical domain of an operation (negative density, w < z, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Velocity J/n requested at a vacuum state n <= 0.
class VacuumError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Grids that should conform do not.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No admissible answer exists for the given input (e.g. zero density with positive doping).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two quadrature orders disagree beyond tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite value or excessive positivity clamping during time integration.
class BlowupError : public std::runtime_error {
 public:
  BlowupError(const std::string& what, std::size_t cell, double time)
      : std::runtime_error(what), cell_(cell), time_(time) {}

  std::size_t cell() const noexcept { return cell_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t cell_;
  double time_;
};

/// Shooting bracket without a sign change.
class BracketError : public std::runtime_error {
 public:
  BracketError(const std::string& what, double residual_lo, double residual_hi)
      : std::runtime_error(what), residual_lo_(residual_lo), residual_hi_(residual_hi) {}

  double residual_lo() const noexcept { return residual_lo_; }
  double residual_hi() const noexcept { return residual_hi_; }

 private:
  double residual_lo_;
  double residual_hi_;
};

/// A diagnostic refused to run because its preconditions are not met.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Configuration rejected; carries every problem found, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

}  // namespace ephydro
