#pragma once

#include <stdexcept>
#include <string>

namespace ldgof {

// Base for every error raised by the library. The CLI maps the concrete
// subclasses onto exit statuses, so new failure kinds should derive from one
// of the categories below rather than from Error directly.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input validation failures (exit status 2).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class RangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ShapeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ContractError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateProfileError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Refusals: enumeration guard or simulation budget (exit status 3).
class RefusalError : public Error {
 public:
  using Error::Error;
};

class TooLargeError : public RefusalError {
 public:
  using RefusalError::RefusalError;
};

class BudgetError : public RefusalError {
 public:
  using RefusalError::RefusalError;
};

// A brute-force summation did not converge within its term guard.
class OracleFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace ldgof
