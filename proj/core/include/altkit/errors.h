#pragma once

#include <stdexcept>
#include <string>

namespace altkit {

// Base class for every exception thrown by altkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input: unparsable rationals, bad JSON, invalid specs.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Evaluation outside the domain of a log-power expression (x <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A mathematical claim that was being checked turned out false.
class VerificationError : public Error {
 public:
  using Error::Error;
};

// A linear system was singular to working tolerance.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

}  // namespace altkit
