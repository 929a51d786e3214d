#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace netfic {

enum class Errc {
  NotPrime,
  UnknownBlock,
  WidthMismatch,
  DomainViolation,
  CapExceeded,
  CycleDetected,
  MissingKernel,
  MissingDecoder,
  LengthMismatch,
  TableTooLarge,
  BadExpr,
  Parse,
  Semantic,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::UnknownBlock: return "UnknownBlock";
    case Errc::WidthMismatch: return "WidthMismatch";
    case Errc::DomainViolation: return "DomainViolation";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::MissingKernel: return "MissingKernel";
    case Errc::MissingDecoder: return "MissingDecoder";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::TableTooLarge: return "TableTooLarge";
    case Errc::BadExpr: return "BadExpr";
    case Errc::Parse: return "Parse";
    case Errc::Semantic: return "Semantic";
  }
  return "?";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Structural validation result. Findings are data, not exceptions: a
// validator returns the full list instead of stopping at the first problem.
struct Finding {
  std::string rule;    // violated invariant, e.g. "CycleDetected"
  std::string detail;  // offending element(s)
};

using Findings = std::vector<Finding>;

}  // namespace netfic
