#pragma once

#include <stdexcept>
#include <string>

namespace ncf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An element that should lie in a given algebra does not (residual above tolerance).
class SpanResidualError : public Error {
 public:
  SpanResidualError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// A numerical post-condition that must hold by construction failed.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

// A model could not be assembled from its inputs.
class BuildError : public Error {
 public:
  using Error::Error;
};

// Input file could not be parsed or has the wrong shape.
class MalformedInput : public Error {
 public:
  using Error::Error;
};

}  // namespace ncf
