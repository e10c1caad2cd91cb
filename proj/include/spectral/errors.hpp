#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectral {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural mismatch: wrong dimension, wrong length, incompatible grids.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of the operation (p < 1, empty set, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition does not hold for the given data. Carries
/// the linear indices that violate it (truncated to a handful).
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, std::vector<std::uint64_t> offending)
      : Error(what), offending_(std::move(offending)) {}

  const std::vector<std::uint64_t>& offending() const noexcept { return offending_; }

 private:
  std::vector<std::uint64_t> offending_;
};

/// Input data is inconsistent (e.g. observed spectrum not conjugate-symmetric).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Recovery cannot proceed: nothing is observed.
class UnrecoverableError : public Error {
 public:
  using Error::Error;
};

/// An enumeration or search exceeded its configured budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace spectral
