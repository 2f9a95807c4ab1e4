#pragma once

#include <stdexcept>
#include <string>

namespace locdeploy {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two connected nodes closer than the minimum separation.
class CoincidentPointsError : public Error {
 public:
  CoincidentPointsError(int i, int j, double distance);
  int first() const { return first_; }
  int second() const { return second_; }

 private:
  int first_;
  int second_;
};

/// The FIM is numerically singular (localizability lost).
class SingularFimError : public Error {
 public:
  SingularFimError(double lambda_min, double lambda_max);
  double lambda_min() const { return lambda_min_; }
  double lambda_max() const { return lambda_max_; }

 private:
  double lambda_min_;
  double lambda_max_;
};

/// A constrained link reached the hard distance limit.
class BarrierViolationError : public Error {
 public:
  BarrierViolationError(int i, int j, double distance, double dmax);
};

/// A gradient was requested for a potential that only supports evaluation.
class UnsupportedGradientError : public Error {
 public:
  using Error::Error;
};

class SolverDivergenceError : public Error {
 public:
  using Error::Error;
};

class SolverNonConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Backtracking could not find a decrease.
class StepPolicyError : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario document. `line` is 1-based, or 0 when unknown.
class ScenarioParseError : public Error {
 public:
  ScenarioParseError(const std::string& field, const std::string& what, int line = 0);
  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

}  // namespace locdeploy
