#pragma once

#include <stdexcept>
#include <string>

namespace ltrace {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an input's dimension disagrees with the operator or grid it is
/// used with.
class DimensionError : public Error {
 public:
  DimensionError(const std::string& what, long expected, long actual)
      : Error(what + ": expected " + std::to_string(expected) + ", got " +
              std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  long expected() const { return expected_; }
  long actual() const { return actual_; }

 private:
  long expected_;
  long actual_;
};

/// A parameter lies outside its admissible range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A matrix that had to be inverted was numerically singular.
class SingularError : public Error {
 public:
  SingularError(const std::string& what, double sigma_min)
      : Error(what + " (sigma_min = " + std::to_string(sigma_min) + ")"),
        sigma_min_(sigma_min) {}

  double sigma_min() const { return sigma_min_; }

 private:
  double sigma_min_;
};

/// Malformed input document. `location` names the line or JSON field.
class ParseError : public Error {
 public:
  ParseError(const std::string& location, const std::string& message)
      : Error(location + ": " + message), location_(location) {}

  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

}  // namespace ltrace
