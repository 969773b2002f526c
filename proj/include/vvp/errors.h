#pragma once

#include <stdexcept>
#include <string>

namespace vvp {

// Base for every error raised by the library. Callers that only need to
// distinguish "bad input" from "not enough data" can catch the two
// intermediate classes below.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

class ParameterError : public InputError {
 public:
  using InputError::InputError;
};

class SequenceError : public InputError {
 public:
  using InputError::InputError;
};

class StateError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class EmptyModelError : public InsufficientDataError {
 public:
  using InsufficientDataError::InsufficientDataError;
};

class ColdStartError : public InsufficientDataError {
 public:
  using InsufficientDataError::InsufficientDataError;
};

}  // namespace vvp
