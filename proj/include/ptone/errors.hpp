#pragma once

#include <stdexcept>
#include <string>

namespace ptone {

/// Argument outside the mathematical domain of an operation (beyond a
/// conjugate point, evaluation at a pole, nonpositive test function, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Malformed problem or configuration. The CLI maps this to exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Iterative method failed to converge. The CLI maps this to exit code 3.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// A computed result failed its own postcondition check. Exit code 1.
class VerificationError : public std::runtime_error {
 public:
  explicit VerificationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ptone
