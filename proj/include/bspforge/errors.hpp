#pragma once

#include <stdexcept>
#include <string>

namespace bspforge {

// Base for all library errors. Subclasses map 1:1 onto CLI exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad shapes, invalid flags, out-of-range configuration. Exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

// A required on-disk artifact (checkpoint, corpus) is absent. Exit code 3.
struct MissingArtifactError : Error {
  using Error::Error;
};

// Non-finite loss or other numerical breakdown. Exit code 4.
struct NumericalError : Error {
  using Error::Error;
};

// A model whose every convex is degenerate. Exit code 5.
struct EmptyShapeError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace bspforge
