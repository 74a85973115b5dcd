#pragma once

#include <stdexcept>
#include <string>

namespace nomacomp {

/// Scenario configuration is malformed or out of range (CLI exit code 2).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Numeric input outside an operation's domain (NaN, zero vector, ...).
class InvalidInput : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Output path could not be created or written (CLI exit code 3).
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace nomacomp
