#pragma once

#include <stdexcept>
#include <string>

namespace medgeo {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside its mathematical domain (alpha not in (0,1), bad range, ...).
struct DomainError : Error {
  using Error::Error;
};

// Input file does not have the declared shape (missing column, bad header).
struct SchemaError : Error {
  using Error::Error;
};

// A cell or config entry could not be parsed.
struct ParseError : Error {
  using Error::Error;
};

// Design matrix is numerically rank deficient.
struct CollinearityError : Error {
  using Error::Error;
};

// Iterative solver did not converge.
struct ConvergenceError : Error {
  using Error::Error;
};

// Grid search exhausted without finding a region witness.
struct WitnessNotFoundError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace medgeo
