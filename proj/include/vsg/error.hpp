#pragma once

#include <stdexcept>
#include <string>

namespace vsg {

enum class ErrorCode {
  InvalidInput,
  DegenerateImpedance,
  InfeasibleOperatingPoint,
  DesignRegion,
  ExcludedPoint,
  NoCrossover,
  NumericFailure,
  DimensionMismatch,
  Normalization,
  TrainingFailure,
  EmptySplit,
  Io,
  Config,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "invalid input";
    case ErrorCode::DegenerateImpedance: return "degenerate impedance";
    case ErrorCode::InfeasibleOperatingPoint: return "infeasible operating point";
    case ErrorCode::DesignRegion: return "outside design region";
    case ErrorCode::ExcludedPoint: return "excluded frequency point";
    case ErrorCode::NoCrossover: return "no gain crossover";
    case ErrorCode::NumericFailure: return "numeric failure";
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::Normalization: return "normalization error";
    case ErrorCode::TrainingFailure: return "training failure";
    case ErrorCode::EmptySplit: return "empty split";
    case ErrorCode::Io: return "i/o error";
    case ErrorCode::Config: return "config error";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vsg
