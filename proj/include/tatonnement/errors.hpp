#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tatonnement {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A price left the strictly positive orthant, or an input is outside an
/// operation's domain. Carries the last valid price point when known.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what, std::vector<double> last_valid = {})
      : Error(what), last_valid_(std::move(last_valid)) {}

  const std::vector<double>& last_valid() const noexcept { return last_valid_; }

 private:
  std::vector<double> last_valid_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class DegenerateVector : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  explicit NoConvergence(const std::string& what, std::vector<double> last_iterate = {})
      : Error(what), last_iterate_(std::move(last_iterate)) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

 private:
  std::vector<double> last_iterate_;
};

class NotAnEquilibrium : public Error {
 public:
  using Error::Error;
};

class NotConverging : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace tatonnement
