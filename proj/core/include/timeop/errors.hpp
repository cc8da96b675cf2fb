#pragma once

#include <stdexcept>
#include <string>

namespace timeop {

/// Invalid construction parameter (grid sizes, negative times, unknown names).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A function or operator falls outside the domain an operation requires.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two objects that must live on the same discretization do not.
class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed run configuration or unusable output location.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace timeop
