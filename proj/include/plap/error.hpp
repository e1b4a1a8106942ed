#pragma once

#include <stdexcept>
#include <string>

namespace plap {

enum class ErrorKind {
  InvalidDimension,
  TooFewPoints,
  InvalidArgument,
  GridMismatch,
  OutOfRange,
  NonConvergence,
  StepRejected,
  NoFeasibleEta,
  EmptyCloud,
  Parse,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Inner solver failure; carries the residual reached before giving up.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double residual, int iterations)
      : Error(ErrorKind::NonConvergence, what),
        residual_(residual),
        iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

}  // namespace plap
