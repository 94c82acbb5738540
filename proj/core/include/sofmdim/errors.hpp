#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace sofmdim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An exact solver or exhaustive enumeration refused an instance that is
/// larger than its configured limit. Callers switch to a bound mode.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

/// A group element outside the support of a sofic approximation, or an
/// action element that cannot be realized from the generator maps.
class UndefinedElement : public Error {
 public:
  using Error::Error;
};

/// An assertion-grade check was handed a count that is only a bound.
class InexactCount : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& reason)
      : Error(field + ": " + reason), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace sofmdim
