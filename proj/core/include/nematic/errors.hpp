#pragma once

#include <stdexcept>
#include <string>

namespace nematic {

/// The saddle-point factorization hit a (numerically) singular matrix.
class SingularMatrixError : public std::runtime_error {
public:
  explicit SingularMatrixError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Newton iteration produced a non-finite residual.
class DivergenceError : public std::runtime_error {
public:
  explicit DivergenceError(const std::string& what)
      : std::runtime_error(what) {}
};

/// A dense eigen- or singular-value solve failed.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Configuration text could not be parsed; carries the 1-based line number
/// (0 when the error is not tied to a line).
class ConfigError : public std::runtime_error {
public:
  ConfigError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  [[nodiscard]] int line() const noexcept { return line_; }

private:
  int line_;
};

}  // namespace nematic
