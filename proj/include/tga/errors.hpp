#pragma once

#include <stdexcept>
#include <string>

namespace tga {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (dimension mismatch, index range, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A space descriptor or norm failed validation.
class SpaceError : public Error {
 public:
  using Error::Error;
};

/// Malformed run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace tga
