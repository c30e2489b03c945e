#pragma once

#include <stdexcept>
#include <string>

namespace jcmss {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// A series or iteration could not reach the requested accuracy within its budget.
class AccuracyError : public Error {
public:
  using Error::Error;
};

/// The physical temperature map has a non-positive denominator.
class UndefinedTemperatureError : public DomainError {
public:
  using DomainError::DomainError;
};

/// A root search target lies outside the attainable range of the scan.
class NoBracketError : public DomainError {
public:
  using DomainError::DomainError;
};

/// Rejection sampling gave up after too many consecutive rejections.
class RejectionOverflowError : public Error {
public:
  using Error::Error;
};

/// A file could not be written or moved into place.
class IoError : public Error {
public:
  using Error::Error;
};

/// Malformed or invalid input file.
class ParseError : public Error {
public:
  using Error::Error;
};

}  // namespace jcmss
