#pragma once

#include <stdexcept>
#include <string>

namespace marswpt {

/// Argument outside the mathematical domain of an operation (d <= 0, P < 0, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rejected configuration. The message lists every violation found.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed external input (CSV, model files).
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Coefficient fitting failed (rank deficiency, invalid denominator).
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A harvester model was evaluated where its denominator is not positive.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace marswpt
