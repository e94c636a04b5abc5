#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dml {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class FieldMismatch : public Error {
 public:
  using Error::Error;
};

/// A coefficient or coordinate has a denominator divisible by p.
class NonIntegralAtP : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownVariable : public ParseError {
 public:
  using ParseError::ParseError;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class NoGoodPrime : public Error {
 public:
  using Error::Error;
};

class ContractionNotCertified : public Error {
 public:
  using Error::Error;
};

class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

class DegenerateRecurrence : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace dml
