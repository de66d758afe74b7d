#pragma once

#include <stdexcept>
#include <string>

namespace edur {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation documented with a precondition (Hermitian input, binary
// observable, ...) received an argument that violates it.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NotPsdError : public Error {
 public:
  using Error::Error;
};

// Parameter outside its admissible interval (mixture, angle, ...).
class RangeError : public Error {
 public:
  using Error::Error;
};

// Square-root argument of the Branciard relation is negative.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Two independent routes to the same quantity disagree; the apparatus model
// is broken.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Quadrature refinement did not settle.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

class EmptyDataError : public Error {
 public:
  using Error::Error;
};

class ProtocolIncompleteError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace edur
