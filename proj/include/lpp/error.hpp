#pragma once

#include <stdexcept>
#include <string>

namespace lpp {

// Invalid parameters or arguments (a model constraint, an index out of range).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// The computation itself failed: Levinson breakdown, singular Fredholm
// matrix, Painleve blow-up, insufficient working precision.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lpp
