#pragma once

// Vector algebra of Lorentz-Minkowski 3-space with signature (-,+,+).

#include <array>
#include <cmath>
#include <string_view>

namespace minkiso {

/// A vector of E_1^3. `x1` is the timelike coordinate. Components are always finite.
class Vec3M {
 public:
  constexpr Vec3M() noexcept = default;
  /// Throws Error(InvalidArgument) on NaN or infinite components.
  Vec3M(double x1, double x2, double x3);

  [[nodiscard]] constexpr double x1() const noexcept { return c_[0]; }
  [[nodiscard]] constexpr double x2() const noexcept { return c_[1]; }
  [[nodiscard]] constexpr double x3() const noexcept { return c_[2]; }
  [[nodiscard]] constexpr double operator[](std::size_t i) const noexcept { return c_[i]; }
  [[nodiscard]] constexpr const std::array<double, 3>& components() const noexcept { return c_; }

  static Vec3M e1() noexcept { return unchecked(1.0, 0.0, 0.0); }
  static Vec3M e2() noexcept { return unchecked(0.0, 1.0, 0.0); }
  static Vec3M e3() noexcept { return unchecked(0.0, 0.0, 1.0); }

  Vec3M& operator+=(const Vec3M& o) noexcept {
    c_[0] += o.c_[0];
    c_[1] += o.c_[1];
    c_[2] += o.c_[2];
    return *this;
  }
  Vec3M& operator-=(const Vec3M& o) noexcept {
    c_[0] -= o.c_[0];
    c_[1] -= o.c_[1];
    c_[2] -= o.c_[2];
    return *this;
  }
  Vec3M& operator*=(double s) noexcept {
    c_[0] *= s;
    c_[1] *= s;
    c_[2] *= s;
    return *this;
  }

  friend Vec3M operator+(Vec3M a, const Vec3M& b) noexcept { return a += b; }
  friend Vec3M operator-(Vec3M a, const Vec3M& b) noexcept { return a -= b; }
  friend Vec3M operator*(Vec3M a, double s) noexcept { return a *= s; }
  friend Vec3M operator*(double s, Vec3M a) noexcept { return a *= s; }
  friend Vec3M operator/(Vec3M a, double s) noexcept { return a *= (1.0 / s); }
  friend Vec3M operator-(Vec3M a) noexcept { return a *= -1.0; }
  friend bool operator==(const Vec3M&, const Vec3M&) = default;

  // Arithmetic results skip the finiteness check; only external input is validated.
  static constexpr Vec3M unchecked(double a, double b, double c) noexcept {
    Vec3M v;
    v.c_ = {a, b, c};
    return v;
  }

 private:
  std::array<double, 3> c_{0.0, 0.0, 0.0};
};

enum class CausalCharacter { Spacelike, Timelike, Lightlike };

std::string_view to_string(CausalCharacter c) noexcept;

inline constexpr double kCausalTolerance = 1e-10;

/// <x,y> = -x1 y1 + x2 y2 + x3 y3
[[nodiscard]] constexpr double inner(const Vec3M& x, const Vec3M& y) noexcept {
  return -x.x1() * y.x1() + x.x2() * y.x2() + x.x3() * y.x3();
}

/// Lorentzian cross product; e1 x e2 = -e3, e2 x e3 = e1, e3 x e1 = -e2.
[[nodiscard]] constexpr Vec3M cross(const Vec3M& x, const Vec3M& y) noexcept {
  return Vec3M::unchecked(x.x2() * y.x3() - x.x3() * y.x2(),
                          x.x1() * y.x3() - x.x3() * y.x1(),
                          x.x2() * y.x1() - x.x1() * y.x2());
}

[[nodiscard]] constexpr double euclid_dot(const Vec3M& x, const Vec3M& y) noexcept {
  return x.x1() * y.x1() + x.x2() * y.x2() + x.x3() * y.x3();
}

[[nodiscard]] inline double euclid_norm(const Vec3M& x) noexcept {
  return std::sqrt(euclid_dot(x, x));
}

/// sqrt(|<x,x>|)
[[nodiscard]] inline double norm(const Vec3M& x) noexcept { return std::sqrt(std::abs(inner(x, x))); }

/// Classifies against a relative band tol * |x|_E^2. The zero vector is spacelike.
[[nodiscard]] CausalCharacter causal_character(const Vec3M& x, double tol = kCausalTolerance);

/// True iff two timelike vectors lie in the same timecone (<v,w> < 0).
/// Throws Error(NotTimelike) otherwise.
[[nodiscard]] bool same_timecone(const Vec3M& v, const Vec3M& w, double tol = kCausalTolerance);

/// theta >= 0 with <v,w> = -|v||w| cosh(theta). Requires two timelike vectors in one timecone.
[[nodiscard]] double hyperbolic_angle_timelike(const Vec3M& v, const Vec3M& w,
                                               double tol = kCausalTolerance);

/// Signed theta with <v,w> = |v||w| sinh(theta) for spacelike v and timelike w.
/// The unsigned angle is std::abs of the result.
[[nodiscard]] double angle_spacelike_timelike(const Vec3M& v, const Vec3M& w,
                                              double tol = kCausalTolerance);

/// v / |v|, keeping the causal sign of <v,v>. Throws on (near) null vectors.
[[nodiscard]] Vec3M normalized(const Vec3M& v, double tol = kCausalTolerance);

/// Lorentz boost in the (x1,x2) plane with rapidity `theta`.
[[nodiscard]] Vec3M boost_x2(const Vec3M& v, double theta) noexcept;

}  // namespace minkiso
