#pragma once

#include <stdexcept>
#include <string>

namespace mira {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: malformed files, invalid arguments, shape mismatches.
/// The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  enum class Kind {
    InvalidArgument,
    MissingFile,
    NonFinite,
    DimensionMismatch,
    Malformed,
  };

  InputError(Kind kind, const std::string& message)
      : Error(message), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// A region could not be built because every redraw of the region reference
/// landed on the center (zero radius). The CLI maps this to exit code 3.
class DegenerateRegionError : public Error {
 public:
  using Error::Error;
};

inline InputError invalid_argument(const std::string& message) {
  return InputError(InputError::Kind::InvalidArgument, message);
}

}  // namespace mira
