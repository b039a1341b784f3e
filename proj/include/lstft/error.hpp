#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace lstft {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad shapes, violated preconditions, unreadable files.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver ran out of iterations. Carries the last eigenvalue
/// estimate, its residual, and the last iterate (phase-space samples).
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double last_value, double residual,
                 int iterations, Eigen::MatrixXcd iterate)
      : Error(what),
        last_value_(last_value),
        residual_(residual),
        iterations_(iterations),
        iterate_(std::move(iterate)) {}

  double last_value() const { return last_value_; }
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }
  const Eigen::MatrixXcd& iterate() const { return iterate_; }

 private:
  double last_value_;
  double residual_;
  int iterations_;
  Eigen::MatrixXcd iterate_;
};

}  // namespace lstft
