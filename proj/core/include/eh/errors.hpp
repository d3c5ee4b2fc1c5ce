#pragma once

#include <stdexcept>
#include <string>

namespace eh {

// Bad inputs: parameter ranges, malformed meshes, contract violations.
// CLI maps these to exit code 2.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Runtime numerical failures: missing roots, divergence, tolerances not met.
// CLI maps these to exit code 1.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eh
