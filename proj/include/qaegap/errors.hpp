#pragma once

#include <stdexcept>
#include <string>

namespace qaegap {

// Error taxonomy maps onto CLI exit codes:
//   InvalidArgument / ParseError -> 3, ResourceLimit -> 4,
//   NonConvergence / SolverError -> 2.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

class ResourceLimit : public Error {
public:
  using Error::Error;
};

class NonConvergence : public Error {
public:
  NonConvergence(const std::string& what, double residual, int iterations)
      : Error(what), residual(residual), iterations(iterations) {}
  double residual = 0.0;
  int iterations = 0;
};

class SolverError : public Error {
public:
  SolverError(const std::string& what, double residual = 0.0)
      : Error(what), residual(residual) {}
  double residual = 0.0;
};

}  // namespace qaegap
