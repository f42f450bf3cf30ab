#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdm {

// Table or block sizes that cannot be served by the configured capacity.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t required_capacity)
      : std::runtime_error(what), required_capacity_(required_capacity) {}

  std::size_t required_capacity() const { return required_capacity_; }

 private:
  std::size_t required_capacity_;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Target outside what the current truncation can reach.
class RangeError : public std::range_error {
 public:
  RangeError(const std::string& what, double max_achievable)
      : std::range_error(what), max_achievable_(max_achievable) {}

  double max_achievable() const { return max_achievable_; }

 private:
  double max_achievable_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Power iteration ran out of iterations. Carries the last iterate's state so
// the caller can decide whether to retry with a larger budget.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_eigenvalue, double last_residual,
                   std::size_t iterations)
      : std::runtime_error(what),
        last_eigenvalue_(last_eigenvalue),
        last_residual_(last_residual),
        iterations_(iterations) {}

  double last_eigenvalue() const { return last_eigenvalue_; }
  double last_residual() const { return last_residual_; }
  std::size_t iterations() const { return iterations_; }

 private:
  double last_eigenvalue_;
  double last_residual_;
  std::size_t iterations_;
};

}  // namespace mdm
