#pragma once

#include <stdexcept>
#include <string>

namespace corrlab {

/// Thrown when an input violates a documented precondition (bad parameter,
/// malformed configuration, out-of-regime request). Maps to CLI exit code 2.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a computation detects loss of accuracy or stability (NaN,
/// residual gate failure, blow-up sentinel, horizon contamination).
/// Maps to CLI exit code 3.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a run would exceed a resource guard (allocation size, point
/// count). Maps to CLI exit code 4.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace corrlab
