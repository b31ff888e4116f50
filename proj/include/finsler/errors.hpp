#pragma once

#include <stdexcept>
#include <string>

namespace finsler {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation point (or an FD stencil around it) left the declared chart bounds.
struct DomainError : Error {
  using Error::Error;
};

// |y| below the zero-section cutoff where g and A are undefined.
struct DegenerateDirection : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct NonPositiveConformal : Error {
  using Error::Error;
};

// A curve handed to the light-ray lift failed the geodesic residual gate.
struct NotAGeodesic : Error {
  using Error::Error;
};

}  // namespace finsler
