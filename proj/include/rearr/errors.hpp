#pragma once

#include <stdexcept>
#include <string>

namespace rearr {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the operation's domain (bad breaks, t <= 0, bad exponents).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Values of a decreasing step function are not nonincreasing.
class MonotonicityError : public Error {
 public:
  using Error::Error;
};

// An integral or functional that would be infinite.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Grid spacing too coarse for the requested test function.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

class UnknownCheckError : public Error {
 public:
  using Error::Error;
};

// Check invoked on an input kind it cannot consume.
class InputKindError : public Error {
 public:
  using Error::Error;
};

// Malformed space / family / grid text.
class ParseError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace rearr
