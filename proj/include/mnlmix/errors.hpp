#pragma once

#include <stdexcept>
#include <string>

namespace mnlmix {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid slate index or malformed slate.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Infeasible or out-of-range parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Polynomial of the wrong degree for the requested operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class NotARootError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// Oracle lacks a required slate.
class InputError : public Error {
 public:
  using Error::Error;
};

class OracleInconsistentError : public Error {
 public:
  using Error::Error;
};

class DegenerateInstanceError : public Error {
 public:
  using Error::Error;
};

}  // namespace mnlmix
