#pragma once

#include <stdexcept>
#include <string>

namespace qplab {

/// Bad numerical input (non-finite values, out-of-range parameters).
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Mismatched container shapes (lengths, dimensions).
class structural_error : public std::runtime_error {
 public:
  explicit structural_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Iterative solver failed to converge within its budget.
class solver_error : public std::runtime_error {
 public:
  explicit solver_error(const std::string& msg) : std::runtime_error(msg) {}
};

class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qplab
