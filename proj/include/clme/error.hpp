#pragma once

#include <stdexcept>
#include <string>

namespace clme {

enum class ErrorCode {
  InvalidParameter,
  CriticalDamping,
  FreeParticle,
  DegenerateLambda,
  AliasingError,
  StabilityViolation,
  BoundaryLeak,
  ResolutionError,
  FitDiverged,
  ContractViolation,
  ConfigError,
  IoError,
};

const char* to_string(ErrorCode code);

/// Library-wide exception. The code lets callers (the CLI in particular)
/// map failures onto exit statuses without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace clme
