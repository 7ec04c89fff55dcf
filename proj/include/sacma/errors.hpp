#pragma once

#include <stdexcept>
#include <string>

namespace sacma {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A strategy or hyper-parameter value is outside its legal range.
struct InvalidParam : Error {
  using Error::Error;
};

// A matrix argument is non-finite, non-symmetric or otherwise unusable.
struct InvalidMatrix : Error {
  using Error::Error;
};

// A fitness vector passed to an update is incomplete or non-finite.
struct InvalidFitness : Error {
  using Error::Error;
};

// An operation needs more data points than were supplied.
struct NotEnoughData : Error {
  using Error::Error;
};

// Benchmark function id outside the supported set.
struct UnknownFunction : Error {
  using Error::Error;
};

// A caller-supplied input (e.g. a candidate point) is non-finite.
struct InvalidInput : Error {
  using Error::Error;
};

// A statistical routine received an empty or degenerate sample.
struct InvalidSample : Error {
  using Error::Error;
};

}  // namespace sacma
