#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace idesim {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Dimension mismatch or out-of-range argument on an operation.
class InputError : public Error {
 public:
  explicit InputError(const std::string& msg) : Error(msg) {}
};

/// Invalid configuration value (e.g. decay constant outside (0,1)).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Malformed or unsupported input file; carries the offending line number
/// (0 when the failure is not tied to a specific line).
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, long line)
      : Error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

/// Iterative solve exhausted its restart budget without reaching tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& msg, std::vector<double> residual_history)
      : Error(msg), residual_history_(std::move(residual_history)) {}
  const std::vector<double>& residual_history() const noexcept {
    return residual_history_;
  }

 private:
  std::vector<double> residual_history_;
};

/// NaN/Inf appeared in an iterate, or a factorization hit a zero pivot.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& msg) : Error(msg) {}
};

/// A configured size cap (oracle dimension, nnz budget) was exceeded.
/// `observed` carries the value that blew the cap (nnz, n, ...).
class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& msg, long long observed = 0)
      : Error(msg), observed_(observed) {}
  long long observed() const noexcept { return observed_; }

 private:
  long long observed_;
};

}  // namespace idesim
