#pragma once

#include <stdexcept>

namespace mlh {

/// Malformed or invalid JSON job/medium descriptor.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A closed form was requested for a medium that violates rho_2 sqrt(a_2) = rho_3 sqrt(a_3).
class MatchingConditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Initial data cannot supply a derivative of the requested order.
class DerivativeOrderError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace mlh
