#pragma once

#include <stdexcept>
#include <string>

#include "lovo/types.hpp"

namespace lovo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: dimension mismatches, empty sets, bad indices.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A component oracle returned a non-finite value.
class OracleFailure : public Error {
 public:
  OracleFailure(ComponentIndex index, Vector x);

  ComponentIndex index() const { return index_; }
  const Vector& point() const { return x_; }

 private:
  ComponentIndex index_;
  Vector x_;
};

/// The interpolation system is (numerically) singular; the sample set has
/// to be rebuilt or improved before a model can be formed.
class GeometryFailure : public Error {
 public:
  using Error::Error;
};

/// exchange_point was offered a point that carries no new information.
class RejectionError : public Error {
 public:
  using Error::Error;
};

class RegistryError : public Error {
 public:
  using Error::Error;
};

/// Thrown by metered evaluation once the ledger budget is spent.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lovo
