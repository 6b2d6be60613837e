#pragma once

#include <stdexcept>
#include <string>

namespace secretnet {

/// Tolerance for every probability comparison in floating point.
inline constexpr double kTolerance = 1e-12;

/// Thrown when an input violates an operation's preconditions. The CLI maps
/// it to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace secretnet
