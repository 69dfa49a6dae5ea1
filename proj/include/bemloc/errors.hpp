#pragma once

#include <stdexcept>
#include <string>

namespace bemloc {

// Invalid user input: unknown names, malformed files, violated preconditions.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Failures inside the numerical pipeline (lost definiteness, quadrature budget).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bemloc
