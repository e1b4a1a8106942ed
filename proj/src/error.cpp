#include "plap/error.hpp"

namespace plap {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::TooFewPoints: return "too-few-points";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::GridMismatch: return "grid-mismatch";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::NonConvergence: return "solver-nonconvergence";
    case ErrorKind::StepRejected: return "step-rejected";
    case ErrorKind::NoFeasibleEta: return "no-feasible-eta";
    case ErrorKind::EmptyCloud: return "empty-cloud";
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::Io: return "io-error";
  }
  return "unknown";
}

}  // namespace plap
