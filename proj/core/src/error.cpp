#include "gidx/error.hpp"

namespace gidx {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorCode::NotACocycle: return "NotACocycle";
    case ErrorCode::NotScalar: return "NotScalar";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::WeakCocycleViolation: return "WeakCocycleViolation";
    case ErrorCode::TwistMismatch: return "TwistMismatch";
    case ErrorCode::CoverMismatch: return "CoverMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::IncompatibleAtlas: return "IncompatibleAtlas";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::StabilizationFailed: return "StabilizationFailed";
    case ErrorCode::NonConstantKernel: return "NonConstantKernel";
    case ErrorCode::FrameDegeneracy: return "FrameDegeneracy";
    case ErrorCode::NotElliptic: return "NotElliptic";
    case ErrorCode::NotCertified: return "NotCertified";
    case ErrorCode::NotDiracPreset: return "NotDiracPreset";
    case ErrorCode::SupportLeak: return "SupportLeak";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::InvalidComplex: return "InvalidComplex";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {
std::string compose(ErrorCode code, const std::string& module, const std::string& op,
                    const std::string& detail) {
  std::string msg(to_string(code));
  msg += " [" + module + "::" + op + "]";
  if (!detail.empty()) msg += ": " + detail;
  return msg;
}
}  // namespace

Error::Error(ErrorCode code, std::string module, std::string op, std::string detail)
    : std::runtime_error(compose(code, module, op, detail)),
      code_(code),
      module_(std::move(module)),
      op_(std::move(op)),
      detail_(std::move(detail)) {}

}  // namespace gidx
