#include "specclust/error.hpp"

#include <utility>

namespace specclust {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  case ErrorCode::DuplicateEntry: return "DuplicateEntry";
  case ErrorCode::DegenerateVector: return "DegenerateVector";
  case ErrorCode::NotSquare: return "NotSquare";
  case ErrorCode::IsolatedNode: return "IsolatedNode";
  case ErrorCode::ZeroDegree: return "ZeroDegree";
  case ErrorCode::BadConfig: return "BadConfig";
  case ErrorCode::Breakdown: return "Breakdown";
  case ErrorCode::MaxRestartsExceeded: return "MaxRestartsExceeded";
  case ErrorCode::NotConverged: return "NotConverged";
  case ErrorCode::NotSymmetric: return "NotSymmetric";
  case ErrorCode::EmptyPart: return "EmptyPart";
  case ErrorCode::ZeroVolumePart: return "ZeroVolumePart";
  case ErrorCode::Parse: return "Parse";
  case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

DegenerateVectorError::DegenerateVectorError(std::size_t index,
                                             const std::string& message)
    : Error(ErrorCode::DegenerateVector, message), index_(index) {}

namespace {

std::string isolated_message(const std::vector<std::size_t>& nodes) {
  std::string msg = "isolated node(s):";
  std::size_t shown = 0;
  for (auto n : nodes) {
    if (shown++ == 16) {
      msg += " ...";
      break;
    }
    msg += ' ';
    msg += std::to_string(n);
  }
  return msg;
}

} // namespace

IsolatedNodeError::IsolatedNodeError(std::vector<std::size_t> nodes)
    : Error(ErrorCode::IsolatedNode, isolated_message(nodes)),
      nodes_(std::move(nodes)) {}

ConvergenceError::ConvergenceError(ErrorCode code, const std::string& message,
                                   std::vector<double> residuals)
    : Error(code, message), residuals_(std::move(residuals)) {}

StageError::StageError(std::string stage, ErrorCode code,
                       const std::string& message)
    : Error(code, stage + ": " + message), stage_(std::move(stage)) {}

} // namespace specclust
