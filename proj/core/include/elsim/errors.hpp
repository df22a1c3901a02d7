#pragma once

#include <stdexcept>
#include <string>

namespace elsim {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The coefficient set does not belong to the regime an operation needs.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// Two fields or states live on different grids or have incompatible shapes.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

/// NaN or Inf encountered at an API boundary.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A run configuration could not be parsed. Carries the offending location.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& source, int line, const std::string& field,
              const std::string& message)
      : Error(format(source, line, field, message)), line_(line), field_(field) {}

  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  static std::string format(const std::string& source, int line,
                            const std::string& field, const std::string& message) {
    std::string out = source;
    if (line > 0) out += ":" + std::to_string(line);
    if (!field.empty()) out += ": " + field;
    return out + ": " + message;
  }

  int line_;
  std::string field_;
};

}  // namespace elsim
