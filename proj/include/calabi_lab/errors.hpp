#pragma once

#include <stdexcept>
#include <string>

namespace calab {

// Base of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class SymmetryViolation : public Error {
 public:
  SymmetryViolation(std::string identity, std::string worst_index, double residual);
  const std::string& identity() const { return identity_; }
  const std::string& worst_index() const { return worst_index_; }
  double residual() const { return residual_; }

 private:
  std::string identity_;
  std::string worst_index_;
  double residual_;
};

class NotKaehler : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class NotEinstein : public Error {
 public:
  using Error::Error;
};

class NotSymmetric : public Error {
 public:
  using Error::Error;
};

class NotReal : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Raised by the --space grammar and file loaders; position is a 0-based offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace calab
