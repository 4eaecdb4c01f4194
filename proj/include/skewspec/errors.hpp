#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace skewspec {

/// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Input lies outside the generic stratum (singular X, unpaired spectrum, coincident x_j, ...).
class NonGenericInput : public Error {
 public:
  using Error::Error;
};

/// A Hermitian pair whose anticommutator is not small.
class NotAntiCommuting : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// dG lost rank; carries the offending spectrum as interleaved (x1, y1, x2, y2, ...).
class DegenerateJacobian : public Error {
 public:
  DegenerateJacobian(const std::string& what, int rank, int expected, std::vector<double> spectrum)
      : Error(what), rank_(rank), expected_(expected), spectrum_(std::move(spectrum)) {}
  int rank() const noexcept { return rank_; }
  int expected_rank() const noexcept { return expected_; }
  const std::vector<double>& spectrum() const noexcept { return spectrum_; }

 private:
  int rank_;
  int expected_;
  std::vector<double> spectrum_;
};

}  // namespace skewspec
