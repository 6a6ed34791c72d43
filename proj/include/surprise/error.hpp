#pragma once

#include <stdexcept>
#include <string>

namespace surprise {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CSV or config text that cannot be parsed; message names the row/column.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Linear algebra failure (non-PSD input, failed decomposition, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Cholesky pivot failure; carries the first non-positive pivot index.
class DecompositionError : public NumericalError {
 public:
  DecompositionError(const std::string& what, int pivot)
      : NumericalError(what), pivot_(pivot) {}
  int pivot() const { return pivot_; }

 private:
  int pivot_;
};

/// Requested combination is defined by the method but not built here.
class NotImplementedError : public Error {
 public:
  using Error::Error;
};

/// Sampling design cannot be formed (e.g. every kernel is zero).
class DegenerateDesignError : public Error {
 public:
  using Error::Error;
};

/// Variance/interval computation unavailable (singular curvature, ...).
class InferenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace surprise
