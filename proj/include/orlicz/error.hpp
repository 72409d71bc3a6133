#pragma once

#include <stdexcept>
#include <string>

namespace orlicz {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its documented range.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Evaluation would leave the finite range of an N-function.
class DomainOverflow : public Error {
 public:
  using Error::Error;
};

/// The N-function lacks metadata (Delta2 or class E constants) the operation needs.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// A quadrature that a bound depends on does not converge.
class DivergentIntegral : public Error {
 public:
  using Error::Error;
};

/// Closed form evaluated at a point where it is singular.
class SingularEndpoint : public Error {
 public:
  using Error::Error;
};

}  // namespace orlicz
