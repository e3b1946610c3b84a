#pragma once

#include <stdexcept>
#include <string>

namespace fraclab {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

class InvalidWeightError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the range where the quantity is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateLevelError : public Error {
 public:
  using Error::Error;
};

class InvalidInitError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class SweepError : public Error {
 public:
  using Error::Error;
};

}  // namespace fraclab
