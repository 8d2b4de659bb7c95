#pragma once

#include <stdexcept>
#include <string>

namespace gencluster {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live over different variable tables.
class TableMismatch : public Error {
 public:
  TableMismatch() : Error("operands are defined over different variable tables") {}
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

/// Multi-term division left a nonzero remainder.
class NonDivisible : public Error {
 public:
  using Error::Error;
};

/// Two terms of a polynomial have different degrees under a grading.
class Inhomogeneous : public Error {
 public:
  using Error::Error;
};

class SubstitutionError : public Error {
 public:
  using Error::Error;
};

class InvalidExchangeMatrix : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class RootFailure : public Error {
 public:
  using Error::Error;
};

class UnsupportedRoot : public Error {
 public:
  using Error::Error;
};

class NormalizationFailure : public Error {
 public:
  using Error::Error;
};

class ReciprocityFailure : public Error {
 public:
  using Error::Error;
};

/// An x-function failed to be a Laurent polynomial in x (polynomial in y, z).
class LaurentViolation : public Error {
 public:
  using Error::Error;
};

/// A tropical y-variable of a principal pattern picked up a z-exponent.
class ZLeakage : public Error {
 public:
  using Error::Error;
};

class NonInteger : public Error {
 public:
  using Error::Error;
};

class InvalidSkewsymmetrizer : public Error {
 public:
  using Error::Error;
};

/// Malformed user input (JSON, expressions, flags).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace gencluster
