#pragma once

#include <stdexcept>
#include <string>

namespace gordonlab {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Request beyond the data that is available (e.g. too few convergents).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A configured digit or work budget would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation exactly at the singular lattice point of a power-singular term.
class SingularityHit : public std::runtime_error {
 public:
  explicit SingularityHit(double where)
      : std::runtime_error("singularity hit at x = " + std::to_string(where)), position(where) {}
  double position;
};

/// The ODE integrator could not continue.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double last_good_x)
      : std::runtime_error(what + " (last good x = " + std::to_string(last_good_x) + ")"),
        last_good(last_good_x) {}
  double last_good;
};

/// A guaranteed inequality or identity did not hold on computed data.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Potential DSL / CLI argument syntax or validation error with a source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line(line),
        column(column) {}
  std::size_t line;
  std::size_t column;
};

}  // namespace gordonlab
