#pragma once

#include <stdexcept>
#include <string>

namespace eqone {

/// Invalid argument, configuration or precondition violation.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation produced a non-finite or otherwise unusable value.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eqone
