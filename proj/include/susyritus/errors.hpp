#pragma once

#include <stdexcept>
#include <string>

namespace susyritus {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A series, asymptotic expansion or continuation failed its own error estimate.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Level index outside the bound-state range of a system.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// The auxiliary solution u1 has a node, so the partner system is singular.
class SingularTransformError : public Error {
 public:
  using Error::Error;
};

/// The requested transform is not the level-addition case.
class UnsupportedTransformError : public Error {
 public:
  using Error::Error;
};

/// Momentum-space propagator evaluated on (or too close to) its pole.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Integrand does not decay inside the integration window.
class TailError : public Error {
 public:
  using Error::Error;
};

/// Finite-difference step shrank below its floor without meeting the estimate.
class StepUnderflow : public Error {
 public:
  using Error::Error;
};

/// Invalid physical or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace susyritus
