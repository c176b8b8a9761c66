#pragma once

#include <stdexcept>
#include <string>

namespace cnt {

/// Invalid configuration value or inconsistent setup. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent input data (unsorted stream, bad file record).
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Query outside the valid domain (time, displacement, window span).
class RangeError : public std::runtime_error {
public:
  explicit RangeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input without enough structure for the requested computation
/// (zero-variance map, empty correlation window).
class DegenerateInputError : public std::runtime_error {
public:
  explicit DegenerateInputError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cnt
