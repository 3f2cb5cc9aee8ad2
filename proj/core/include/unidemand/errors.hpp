#pragma once

#include <stdexcept>
#include <string>

namespace unidemand {

// Base of every error the library throws. The CLI maps the subclasses onto
// exit codes: InputError/DomainError/UnsupportedInputError -> 2,
// ResourceError -> 3, anything else -> 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter is outside the operation's domain (p < 1, eps out of range...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Bisection or another iterative search failed to bracket within its cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// No (c1, c2)-anchoring point could be located for some item.
class AnchoringError : public Error {
 public:
  using Error::Error;
};

// A configured cap (state count, enumeration size, grid size) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// The operation does not accept one of the supplied item kinds.
class UnsupportedInputError : public Error {
 public:
  using Error::Error;
};

// Malformed instance file or unknown distribution family.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace unidemand
