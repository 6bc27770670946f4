#pragma once

#include <stdexcept>
#include <string>

namespace sl2lab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Determinant too close to zero for the requested operation.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// A product left the range representable as a plain double matrix.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Request exceeds what the enumeration/allocation limits allow.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Incompatible experiment configuration (e.g. base/map pairing).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An integrand returned a non-finite value.
class IntegrandError : public Error {
 public:
  IntegrandError(double theta, double value)
      : Error("integrand is not finite at theta=" + std::to_string(theta) +
              " (value " + std::to_string(value) + ")"),
        theta_(theta) {}

  double theta() const noexcept { return theta_; }

 private:
  double theta_;
};

}  // namespace sl2lab
