#pragma once

#include <stdexcept>
#include <string>

namespace levysup {

// Parameter outside the documented range of a model or operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The (family, operation) pair has no implementation.
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Caller violated a documented precondition (e.g. wrong regularity type).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A numerical procedure did not reach its requested accuracy.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace levysup
