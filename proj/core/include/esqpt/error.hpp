#pragma once

#include <stdexcept>
#include <string>

namespace esqpt {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters or inputs outside the documented domain. The CLI maps this to exit code 2.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to converge or produced a non-finite value.
/// The CLI maps this to exit code 3.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// The time window of a signal ends before the first revival is complete.
class HorizonTooShort : public NumericalFailure {
 public:
  HorizonTooShort() : NumericalFailure("horizon too short") {}
  explicit HorizonTooShort(const std::string& detail)
      : NumericalFailure("horizon too short: " + detail) {}
};

}  // namespace esqpt
