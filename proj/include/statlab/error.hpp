#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace statlab {

enum class ErrorCode {
  Syntax,
  UnknownIdentifier,
  CoordinateOutOfRange,
  Domain,
  NotPositiveDefinite,
  DegenerateInput,
  DegeneratePlane,
  StepOutsideDomain,
  PreconditionViolated,
  NotTraceFree,
  NotUnit,
  InvalidSample,
  InvalidCoefficients,
  InvalidPinch,
  PositiveH3,
  PositiveN,
  InvalidSpec,
  SpecFile,
};

const char* to_string(ErrorCode code) noexcept;

/// Base of every error raised by the library. The code identifies the
/// failure class; the message carries the specifics.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Expression parse failure at a byte offset into the source text.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t offset, const std::string& message)
      : Error(code, message + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class NotPositiveDefiniteError : public Error {
 public:
  explicit NotPositiveDefiniteError(double min_eigenvalue)
      : Error(ErrorCode::NotPositiveDefinite,
              "metric is not positive definite (smallest eigenvalue " +
                  std::to_string(min_eigenvalue) + ")"),
        min_eigenvalue_(min_eigenvalue) {}

  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

}  // namespace statlab
