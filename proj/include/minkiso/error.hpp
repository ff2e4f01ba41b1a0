#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace minkiso {

enum class ErrorKind {
  InvalidArgument,
  NotTimelike,
  NotSameTimecone,
  WrongCausalTypes,
  TooFewPoints,
  NonSpacelikeChord,
  DegenerateCurvature,
  NullPrincipalNormal,
  MixedCurveKind,
  SyntaxError,
  UnknownIdentifier,
  DomainError,
  UnknownSurface,
  BadParams,
  DegenerateJacobian,
  NotTimelikeNormal,
  FrameDegenerate,
  OffSurface,
  SilhouetteUndefined,
  DegenerateNormalCurvature,
  NotAnIsophote,
  InfeasibleAngle,
  DenominatorVanishes,
  InvalidSpec,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base error for every library failure; `kind()` identifies the contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Expression syntax error; `offset` is the byte position in the source text.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t offset, std::string expected, const std::string& what)
      : Error(kind, what), offset_(offset), expected_(std::move(expected)) {}

  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }
  [[nodiscard]] const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

/// Raised when a surface point or grid cell cannot produce a timelike unit normal.
class CellError : public Error {
 public:
  CellError(ErrorKind kind, double u, double v, const std::string& what)
      : Error(kind, what), u_(u), v_(v) {}

  [[nodiscard]] double u() const noexcept { return u_; }
  [[nodiscard]] double v() const noexcept { return v_; }

 private:
  double u_;
  double v_;
};

/// The curve fails the constancy test of the isophote characterization.
class NotAnIsophote : public Error {
 public:
  explicit NotAnIsophote(const std::string& what, ErrorKind kind = ErrorKind::NotAnIsophote)
      : Error(kind, what) {}
};

/// The constancy test passed but the constant lies outside the attainable range
/// (|coth θ| > 1 for a timelike axis, 0 < |tanh θ| < 1 for a spacelike one).
class InfeasibleAngle : public NotAnIsophote {
 public:
  explicit InfeasibleAngle(const std::string& what)
      : NotAnIsophote(what, ErrorKind::InfeasibleAngle) {}
};

}  // namespace minkiso
