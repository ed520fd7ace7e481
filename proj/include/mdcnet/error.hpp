#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mdcnet {

enum class ErrorKind {
  InvalidArgument,
  NonPositiveParameter,
  WalkTooShort,
  PathLossTooSmall,
  ArenaTooSmall,
  UnknownKey,
  ParseError,
  EmptyPointSet,
  QuadratureNotConverged,
  ZeroDensity,
  XiZero,
  RootNotConverged,
  RootOnUnitCircle,
  SingularSystem,
  NegativeMass,
  CapacityExceeded,
  Unstable,
  FixedPointNotConverged,
  ZeroCoverage,
  NoDeliveries,
};

constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorKind::WalkTooShort: return "WalkTooShort";
    case ErrorKind::PathLossTooSmall: return "PathLossTooSmall";
    case ErrorKind::ArenaTooSmall: return "ArenaTooSmall";
    case ErrorKind::UnknownKey: return "UnknownKey";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::EmptyPointSet: return "EmptyPointSet";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::ZeroDensity: return "ZeroDensity";
    case ErrorKind::XiZero: return "XiZero";
    case ErrorKind::RootNotConverged: return "RootNotConverged";
    case ErrorKind::RootOnUnitCircle: return "RootOnUnitCircle";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::NegativeMass: return "NegativeMass";
    case ErrorKind::CapacityExceeded: return "CapacityExceeded";
    case ErrorKind::Unstable: return "Unstable";
    case ErrorKind::FixedPointNotConverged: return "FixedPointNotConverged";
    case ErrorKind::ZeroCoverage: return "ZeroCoverage";
    case ErrorKind::NoDeliveries: return "NoDeliveries";
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

}  // namespace mdcnet
