#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace specclust {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  DuplicateEntry,
  DegenerateVector,
  NotSquare,
  IsolatedNode,
  ZeroDegree,
  BadConfig,
  Breakdown,
  MaxRestartsExceeded,
  NotConverged,
  NotSymmetric,
  EmptyPart,
  ZeroVolumePart,
  Parse,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// A similarity measure is undefined for the point at `index()`
/// (zero vector for cosine, constant vector for cross-correlation).
class DegenerateVectorError : public Error {
public:
  DegenerateVectorError(std::size_t index, const std::string& message);

  std::size_t index() const noexcept { return index_; }

private:
  std::size_t index_;
};

class IsolatedNodeError : public Error {
public:
  explicit IsolatedNodeError(std::vector<std::size_t> nodes);

  const std::vector<std::size_t>& nodes() const noexcept { return nodes_; }

private:
  std::vector<std::size_t> nodes_;
};

/// Eigensolver gave up; carries the last residual estimate of each wanted pair.
class ConvergenceError : public Error {
public:
  ConvergenceError(ErrorCode code, const std::string& message,
                   std::vector<double> residuals);

  const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
  std::vector<double> residuals_;
};

/// Error raised by one stage of the clustering pipeline.
class StageError : public Error {
public:
  StageError(std::string stage, ErrorCode code, const std::string& message);

  const std::string& stage() const noexcept { return stage_; }

private:
  std::string stage_;
};

} // namespace specclust
