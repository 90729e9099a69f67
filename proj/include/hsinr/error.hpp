#pragma once

#include <stdexcept>
#include <string>

namespace hsinr {

// Base of all library errors. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape or argument contract violated by the caller.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// File missing, unreadable or unwritable.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed header, bitstream or sidecar.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Non-finite loss, gradient or parameter.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace hsinr
