#pragma once

#include <stdexcept>
#include <string>

namespace dwell {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

class NoBracketError : public Error {
 public:
  using Error::Error;
};

class NoBoundStatesError : public Error {
 public:
  using Error::Error;
};

class NotAnEigenvalueError : public Error {
 public:
  using Error::Error;
};

class DegenerateParameterError : public DomainError {
 public:
  using DomainError::DomainError;
};

class TurningPointError : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

class IncommensurateError : public Error {
 public:
  using Error::Error;
};

class GridError : public Error {
 public:
  using Error::Error;
};

class AmbiguousParityError : public Error {
 public:
  using Error::Error;
};

}  // namespace dwell
