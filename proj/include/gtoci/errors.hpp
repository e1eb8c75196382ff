#pragma once

#include <stdexcept>
#include <string>

namespace gtoci {

/// Raised for out-of-domain numerical parameters (non-positive exponents, bad ranges).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for inconsistent user configuration (duplicate primitives, unknown basis names).
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Series, quadrature, or grid refinement that did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear-algebra failures: indefinite overlap, LAPACK info != 0.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or mismatched integral cache file.
class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gtoci
