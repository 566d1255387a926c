#pragma once

#include <stdexcept>
#include <string>

namespace spinforce {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument values or violated preconditions.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Configuration parsing / validation failure; carries the offending key path.
class ConfigError : public Error {
 public:
  ConfigError(std::string key_path, const std::string& message)
      : Error(key_path.empty() ? message : key_path + ": " + message),
        key_path_(std::move(key_path)) {}

  const std::string& key_path() const { return key_path_; }

 private:
  std::string key_path_;
};

// Iterative scheme failed to reach the requested tolerance; carries the best
// estimate reached and its error bound.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double best_estimate,
                   double error_bound)
      : Error(message),
        best_estimate_(best_estimate),
        error_bound_(error_bound) {}

  double best_estimate() const { return best_estimate_; }
  double error_bound() const { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

// Filesystem / stream failure; message includes the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace spinforce
