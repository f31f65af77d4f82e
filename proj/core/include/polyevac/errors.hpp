#pragma once

#include <stdexcept>
#include <string>

namespace polyevac {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidPolygon : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class InvalidConfiguration : public Error {
 public:
  using Error::Error;
};

class UnsupportedWeightedK : public Error {
 public:
  using Error::Error;
};

class NumericFailure : public Error {
 public:
  using Error::Error;
};

class CheckpointMismatch : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class InfeasibleTrajectory : public Error {
 public:
  InfeasibleTrajectory(const std::string& what, int stage)
      : Error(what), stage_(stage) {}
  int stage() const noexcept { return stage_; }

 private:
  int stage_;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class ParameterOutOfBox : public Error {
 public:
  using Error::Error;
};

class NoKnownConfiguration : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

}  // namespace polyevac
