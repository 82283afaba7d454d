#pragma once

#include <stdexcept>
#include <string>

namespace freefock {

/// A truncated space was asked to hold a vector above its level or degree budget.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// An enumeration or expansion was requested beyond its supported size.
class SizeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// An argument lies outside the domain where the computation is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed model configuration or inconsistent inputs.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace freefock
