#pragma once

#include <stdexcept>
#include <string>

namespace clustercount {

enum class ErrorKind {
  NonPrime,
  UnsupportedSize,
  FieldMismatch,
  DivisionByZero,
  BadRank,
  InvalidForest,
  EmptyCoveredSet,
  NotAdjacent,
  NotALeaf,
  ZeroCoefficient,
  BudgetExceeded,
  Overflow,
  ReportsViolation,
  NotNormalized,
  UnsupportedType,
  BadParity,
  PointNotOnVariety,
  DuplicateAbscissa,
  HeldOutMismatch,
  Parse,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonPrime: return "NonPrime";
    case ErrorKind::UnsupportedSize: return "UnsupportedSize";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::BadRank: return "BadRank";
    case ErrorKind::InvalidForest: return "InvalidForest";
    case ErrorKind::EmptyCoveredSet: return "EmptyCoveredSet";
    case ErrorKind::NotAdjacent: return "NotAdjacent";
    case ErrorKind::NotALeaf: return "NotALeaf";
    case ErrorKind::ZeroCoefficient: return "ZeroCoefficient";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::ReportsViolation: return "ReportsViolation";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::UnsupportedType: return "UnsupportedType";
    case ErrorKind::BadParity: return "BadParity";
    case ErrorKind::PointNotOnVariety: return "PointNotOnVariety";
    case ErrorKind::DuplicateAbscissa: return "DuplicateAbscissa";
    case ErrorKind::HeldOutMismatch: return "HeldOutMismatch";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace clustercount
