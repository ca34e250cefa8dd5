#pragma once

#include <stdexcept>

namespace stir2 {

// Invalid arguments / out-of-domain inputs. CLI exit code 2.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative solver did not reach its tolerance. CLI exit code 3.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A request exceeds the configured memory budget. CLI exit code 2.
class ResourceLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Output-path failures. CLI exit code 4.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stir2
