#include "minkiso/minkowski.hpp"

#include <cmath>
#include <sstream>

#include "minkiso/error.hpp"

namespace minkiso {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotTimelike: return "NotTimelike";
    case ErrorKind::NotSameTimecone: return "NotSameTimecone";
    case ErrorKind::WrongCausalTypes: return "WrongCausalTypes";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::NonSpacelikeChord: return "NonSpacelikeChord";
    case ErrorKind::DegenerateCurvature: return "DegenerateCurvature";
    case ErrorKind::NullPrincipalNormal: return "NullPrincipalNormal";
    case ErrorKind::MixedCurveKind: return "MixedCurveKind";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::UnknownSurface: return "UnknownSurface";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::DegenerateJacobian: return "DegenerateJacobian";
    case ErrorKind::NotTimelikeNormal: return "NotTimelikeNormal";
    case ErrorKind::FrameDegenerate: return "FrameDegenerate";
    case ErrorKind::OffSurface: return "OffSurface";
    case ErrorKind::SilhouetteUndefined: return "SilhouetteUndefined";
    case ErrorKind::DegenerateNormalCurvature: return "DegenerateNormalCurvature";
    case ErrorKind::NotAnIsophote: return "NotAnIsophote";
    case ErrorKind::InfeasibleAngle: return "InfeasibleAngle";
    case ErrorKind::DenominatorVanishes: return "DenominatorVanishes";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
  }
  return "Unknown";
}

std::string_view to_string(CausalCharacter c) noexcept {
  switch (c) {
    case CausalCharacter::Spacelike: return "spacelike";
    case CausalCharacter::Timelike: return "timelike";
    case CausalCharacter::Lightlike: return "lightlike";
  }
  return "unknown";
}

Vec3M::Vec3M(double x1, double x2, double x3) : c_{x1, x2, x3} {
  if (!std::isfinite(x1) || !std::isfinite(x2) || !std::isfinite(x3)) {
    std::ostringstream os;
    os << "non-finite vector component (" << x1 << ", " << x2 << ", " << x3 << ")";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

CausalCharacter causal_character(const Vec3M& x, double tol) {
  if (!(tol >= 0.0)) throw Error(ErrorKind::InvalidArgument, "causal tolerance must be >= 0");
  const double e2 = euclid_dot(x, x);
  if (e2 == 0.0) return CausalCharacter::Spacelike;
  const double q = inner(x, x);
  if (q > tol * e2) return CausalCharacter::Spacelike;
  if (q < -tol * e2) return CausalCharacter::Timelike;
  return CausalCharacter::Lightlike;
}

bool same_timecone(const Vec3M& v, const Vec3M& w, double tol) {
  if (causal_character(v, tol) != CausalCharacter::Timelike ||
      causal_character(w, tol) != CausalCharacter::Timelike) {
    throw Error(ErrorKind::NotTimelike, "same_timecone requires two timelike vectors");
  }
  return inner(v, w) < 0.0;
}

double hyperbolic_angle_timelike(const Vec3M& v, const Vec3M& w, double tol) {
  if (!same_timecone(v, w, tol)) {
    throw Error(ErrorKind::NotSameTimecone, "timelike vectors lie in opposite timecones");
  }
  const double vw = norm(v) * norm(w);
  const double c = -inner(v, w) / vw;
  if (c > 2.0) return std::acosh(c);
  // near theta = 0 acosh loses half the digits; sinh(theta) = |v x w| / (|v||w|) does not
  const Vec3M x = cross(v, w);
  return std::asinh(std::sqrt(std::max(inner(x, x), 0.0)) / vw);
}

double angle_spacelike_timelike(const Vec3M& v, const Vec3M& w, double tol) {
  const bool v_space = causal_character(v, tol) == CausalCharacter::Spacelike && euclid_dot(v, v) > 0.0;
  if (!v_space || causal_character(w, tol) != CausalCharacter::Timelike) {
    throw Error(ErrorKind::WrongCausalTypes,
                "angle_spacelike_timelike needs a nonzero spacelike v and a timelike w");
  }
  return std::asinh(inner(v, w) / (norm(v) * norm(w)));
}

Vec3M normalized(const Vec3M& v, double tol) {
  if (causal_character(v, tol) == CausalCharacter::Lightlike || euclid_dot(v, v) == 0.0) {
    throw Error(ErrorKind::InvalidArgument, "cannot normalize a null vector");
  }
  return v / norm(v);
}

Vec3M boost_x2(const Vec3M& v, double theta) noexcept {
  const double ch = std::cosh(theta);
  const double sh = std::sinh(theta);
  return Vec3M::unchecked(ch * v.x1() + sh * v.x2(), sh * v.x1() + ch * v.x2(), v.x3());
}

}  // namespace minkiso
