#pragma once

#include <stdexcept>
#include <string>

namespace bocs {

// Bad experiment configuration or malformed input files. CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical breakdown that the caller cannot recover from. CLI exit code 3.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bocs
