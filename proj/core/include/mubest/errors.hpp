#pragma once

#include <stdexcept>
#include <string>

namespace mubest {

// All library failures derive from Error so callers (the CLI in particular)
// can map them onto exit codes with a single catch ladder.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Matrix or tensor dimensions do not line up.
class SizeError : public Error {
 public:
  using Error::Error;
};

// A documented precondition (Hermitian, unitary, ...) does not hold.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A data invariant failed after construction or loading.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed input file; the message carries the line or field location.
class ParseError : public Error {
 public:
  using Error::Error;
};

// The requested target cannot be reached (e.g. K below the design bound).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Group closure exceeded its declared size bound.
class GroupOverflowError : public Error {
 public:
  using Error::Error;
};

// Required measurement data is missing from a report.
class DataError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mubest
