#pragma once

#include <stdexcept>
#include <string>

namespace hochsplit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain an operation accepts (e.g. |lambda| >= 1
/// passed to an interior-point construction).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The input does not vanish at the character within tolerance, so it is not
/// an element of the corresponding maximal ideal.
class NotInIdeal : public Error {
 public:
  using Error::Error;
};

/// A cochain window does not cover the indices an operation must read.
class WindowTooSmall : public Error {
 public:
  using Error::Error;
};

/// The modulus of an exact complex number is irrational and cannot be
/// represented as a rational.
class InexactModulus : public Error {
 public:
  using Error::Error;
};

/// A list of rationals is not increasing in the divisibility order.
class ChainNotRefining : public Error {
 public:
  using Error::Error;
};

/// Two grid functions have different steps or misaligned cells.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace hochsplit
