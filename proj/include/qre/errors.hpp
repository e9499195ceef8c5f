#pragma once

#include <stdexcept>
#include <string>

namespace qre {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated (non-PSD input, missing domination, ...).
struct PreconditionError : Error {
  using Error::Error;
};

/// An iterative numerical routine failed to converge.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, int dim) : Error(what), dim(dim) {}
  int dim;
};

/// The requested computation exceeds a hard capability bound (e.g. exhaustive
/// subset search beyond the supported rank).
struct CapabilityError : Error {
  using Error::Error;
};

/// Malformed command line or out-of-range suite parameters.
struct UsageError : Error {
  using Error::Error;
};

/// Malformed or inconsistent input files.
struct IoError : Error {
  using Error::Error;
};

}  // namespace qre
