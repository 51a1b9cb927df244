#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace jrcr {

// Bad user input: malformed files, inconsistent configs, impossible scenarios.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Data that violates the dataset invariants; carries one diagnostic per violation.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "validation failed:";
    for (const auto& s : v) {
      out += "\n  ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> violations_;
};

// Numerical breakdown: singular systems, non-finite objectives.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace jrcr
