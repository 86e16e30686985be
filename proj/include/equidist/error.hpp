#pragma once

#include <stdexcept>
#include <string>

namespace equidist {

enum class ErrorCode {
  kInvalidArgument,
  kZeroPolynomial,
  kOrderMismatch,
  kDegreeGuard,
  kRankDeficient,
  kNoConvergence,
  kInsideSet,
  kUnsupported,
};

/// Base exception for the library. `code()` identifies the failure class so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by orthogonalization when the sampled vectors stop spanning a new
/// direction. `degree()` is the first degree that could not be built.
class RankDeficientError : public Error {
 public:
  RankDeficientError(int degree, const std::string& what)
      : Error(ErrorCode::kRankDeficient, what), degree_(degree) {}

  int degree() const noexcept { return degree_; }

 private:
  int degree_;
};

/// Raised by the Brolin sampler when an inverse-branch solve fails.
class InverseBranchError : public Error {
 public:
  InverseBranchError(int step, const std::string& what)
      : Error(ErrorCode::kNoConvergence, what), step_(step) {}

  int step() const noexcept { return step_; }

 private:
  int step_;
};

}  // namespace equidist
