#pragma once

#include <stdexcept>
#include <string>

namespace pricedisp {

// Every failure raised by the library derives from Error so the CLI can map
// it to a nonzero exit status with one catch clause.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class PriceOutOfRange : public Error {
 public:
  using Error::Error;
};

class IntegrationFailure : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class NonpositivePrice : public Error {
 public:
  using Error::Error;
};

class EmptyPanel : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class InsufficientObservations : public Error {
 public:
  using Error::Error;
};

class AbsorptionFailure : public Error {
 public:
  using Error::Error;
};

// Raised by panel ingestion. row and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : Error(what), row_(row), column_(column) {}

  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

class SchemaMismatch : public Error {
 public:
  using Error::Error;
};

class DuplicateKey : public Error {
 public:
  DuplicateKey(const std::string& what, std::size_t first_row,
               std::size_t second_row)
      : Error(what), first_row_(first_row), second_row_(second_row) {}

  std::size_t first_row() const { return first_row_; }
  std::size_t second_row() const { return second_row_; }

 private:
  std::size_t first_row_;
  std::size_t second_row_;
};

}  // namespace pricedisp
