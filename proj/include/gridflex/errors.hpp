#pragma once

#include <stdexcept>
#include <string>

namespace gridflex {

/// Failure classes; the CLI maps them onto exit codes 2, 3 and 4.
enum class ErrorKind {
  input,         ///< malformed or missing user input
  data_quality,  ///< input parsed but the data cannot be used (gaps, coverage, degenerate values)
  invariant,     ///< an internal consistency check failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& message)
      : std::runtime_error(message), kind_(kind), module_(std::move(module)) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

class InputError : public Error {
 public:
  InputError(std::string module, const std::string& message)
      : Error(ErrorKind::input, std::move(module), message) {}
};

class DataQualityError : public Error {
 public:
  DataQualityError(std::string module, const std::string& message)
      : Error(ErrorKind::data_quality, std::move(module), message) {}
};

class InvariantError : public Error {
 public:
  InvariantError(std::string module, const std::string& message)
      : Error(ErrorKind::invariant, std::move(module), message) {}
};

}  // namespace gridflex
