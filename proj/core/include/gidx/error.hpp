#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gidx {

enum class ErrorCode {
  DegreeOutOfRange,
  NotACocycle,
  NotScalar,
  NotUnitary,
  WeakCocycleViolation,
  TwistMismatch,
  CoverMismatch,
  ShapeMismatch,
  IncompatibleAtlas,
  GridTooCoarse,
  DegreeMismatch,
  StabilizationFailed,
  NonConstantKernel,
  FrameDegeneracy,
  NotElliptic,
  NotCertified,
  NotDiracPreset,
  SupportLeak,
  ParseError,
  UnsupportedVersion,
  InvalidComplex,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure carries the owning module and operation plus a location
// (simplex, node, field) so that diagnostics can point at the offender.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string module, std::string op, std::string detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }
  const std::string& op() const noexcept { return op_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string module_;
  std::string op_;
  std::string detail_;
};

}  // namespace gidx
