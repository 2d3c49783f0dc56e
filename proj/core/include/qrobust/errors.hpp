#pragma once

#include <stdexcept>
#include <string>

namespace qrobust {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Requested register size exceeds the dense-simulation budget.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// Qubit or slot index out of range.
class IndexError : public Error {
  public:
    using Error::Error;
};

/// Malformed gate (identity rotation axis, control == target, ...).
class InvalidGateError : public Error {
  public:
    using Error::Error;
};

/// Array lengths that must agree do not.
class ShapeError : public Error {
  public:
    using Error::Error;
};

/// Argument outside its mathematical domain (negative lambda, empty batch, ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Malformed configuration document. The message names the offending key.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace qrobust
