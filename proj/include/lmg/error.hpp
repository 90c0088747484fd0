#pragma once

#include <stdexcept>
#include <string>

namespace lmg {

// Bad arguments or violated preconditions. The CLI maps these to exit code 2.
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Solver non-convergence or numerically invalid intermediate results.
// The CLI maps these to exit code 1.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw usage_error(message);
}

}  // namespace detail
}  // namespace lmg
