#pragma once

#include <stdexcept>
#include <string>

namespace qtur {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct NotHermitian : Error {
  using Error::Error;
};

struct NotUnitary : Error {
  using Error::Error;
};

// Density-matrix invariant violations (trace, positivity) beyond tolerance.
struct InvalidState : Error {
  using Error::Error;
};

struct InvalidRank : Error {
  using Error::Error;
};

struct SingularState : Error {
  using Error::Error;
};

struct SingularEnvironment : Error {
  using Error::Error;
};

struct DivergentIntegral : Error {
  using Error::Error;
};

struct ZeroVariance : Error {
  using Error::Error;
};

struct DegenerateMeans : Error {
  using Error::Error;
};

struct DegenerateDerivative : Error {
  using Error::Error;
};

struct InvalidMoments : Error {
  using Error::Error;
};

struct NonPositiveArgument : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace qtur
