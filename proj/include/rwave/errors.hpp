// Error taxonomy for the library and CLI.
//
// Every failure the library can raise carries a category that the CLI maps to a
// process exit code: configuration errors -> 2, solver failures -> 3, truncation
// failures -> 4, verification failures -> 5.  Anything else escaping main is a
// plain bug and exits 1.
#pragma once

#include <stdexcept>
#include <string>

namespace rwave {

enum class ErrorClass {
  Config,        // rejected input: exponents, weights, profiles, CLI/config values
  Solver,        // iteration did not behave as a contraction, or left its domain
  Truncation,    // finite-horizon tail estimate exceeds the configured tolerance
  Verification,  // a requested diagnostic could not be computed meaningfully
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const { return cls_; }
  int exit_code() const {
    switch (cls_) {
      case ErrorClass::Config: return 2;
      case ErrorClass::Solver: return 3;
      case ErrorClass::Truncation: return 4;
      case ErrorClass::Verification: return 5;
    }
    return 1;
  }

 private:
  ErrorClass cls_;
};

// -- configuration ------------------------------------------------------------
struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& w) : Error(ErrorClass::Config, "InvalidArgument: " + w) {}
};
// Nonlinearity powers too weak for any small-data scattering construction.
struct SubcriticalExponents : Error {
  explicit SubcriticalExponents(const std::string& w) : Error(ErrorClass::Config, "SubcriticalExponents: " + w) {}
};
// Exponents fail the product condition required by the iterated construction.
struct ConditionViolated : Error {
  explicit ConditionViolated(const std::string& w) : Error(ErrorClass::Config, "ConditionViolated: " + w) {}
};
// A data profile whose size cannot be normalized to the requested amplitude.
struct ProfileUnscalable : Error {
  explicit ProfileUnscalable(const std::string& w) : Error(ErrorClass::Config, "ProfileUnscalable: " + w) {}
};

// -- solver --------------------------------------------------------------------
struct NoContraction : Error {
  explicit NoContraction(const std::string& w) : Error(ErrorClass::Solver, "NoContraction: " + w) {}
};
struct LeftDomain : Error {
  explicit LeftDomain(const std::string& w) : Error(ErrorClass::Solver, "LeftDomain: " + w) {}
};
// Input data does not lie in the class the requested map is defined on.
struct RangeMismatch : Error {
  explicit RangeMismatch(const std::string& w) : Error(ErrorClass::Solver, "RangeMismatch: " + w) {}
};
// Defensive: successive correction terms stopped shrinking.
struct LadderDiverged : Error {
  explicit LadderDiverged(const std::string& w) : Error(ErrorClass::Solver, "LadderDiverged: " + w) {}
};

// -- truncation ------------------------------------------------------------------
struct TailTooFat : Error {
  explicit TailTooFat(const std::string& w) : Error(ErrorClass::Truncation, "TailTooFat: " + w) {}
};

// -- verification ------------------------------------------------------------------
struct DegenerateSeries : Error {
  explicit DegenerateSeries(const std::string& w) : Error(ErrorClass::Verification, "DegenerateSeries: " + w) {}
};
// One or more items of the self-check suite failed.
struct VerificationFailed : Error {
  explicit VerificationFailed(const std::string& w) : Error(ErrorClass::Verification, "VerificationFailed: " + w) {}
};

}  // namespace rwave
