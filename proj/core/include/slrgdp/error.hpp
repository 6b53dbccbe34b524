#pragma once

#include <stdexcept>
#include <string>

namespace slrgdp {

// Base for every error raised by the library. The CLI maps the concrete
// subclass onto its exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. line is 1-based; 0 when the error is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Input that parses but violates a structural or domain rule.
class DataError : public Error {
 public:
  using Error::Error;
};

// Estimation failures: rank deficiency, non-convergence, undefined variance.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double last_residual = 0.0)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace slrgdp
