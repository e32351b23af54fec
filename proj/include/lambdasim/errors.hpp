#pragma once

#include <stdexcept>
#include <string>

namespace lambdasim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// core-dynamics
struct NonConvergence : Error {
  using Error::Error;
};
struct InvalidWindow : Error {
  using Error::Error;
};
struct DivisionByZero : Error {
  using Error::Error;
};
struct DegenerateInput : Error {
  using Error::Error;
};

// pulses
struct InvalidGeometry : Error {
  using Error::Error;
};

// ensemble
struct InvalidSpec : Error {
  using Error::Error;
};

// fitting
struct NoOscillation : Error {
  using Error::Error;
};
struct InsufficientData : Error {
  using Error::Error;
};

// cli-io
struct ParseError : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};
struct SchemaError : Error {
  using Error::Error;
};

}  // namespace lambdasim
