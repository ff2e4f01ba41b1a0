#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace minkiso {

/// Interpolating C2 cubic spline with D channels over strictly increasing knots.
/// Open splines use natural end conditions; periodic splines expect the last
/// knot value to repeat the first one.
template <std::size_t D>
class CubicSpline {
 public:
  using Value = std::array<double, D>;

  CubicSpline(std::vector<double> knots, std::vector<Value> values, bool periodic);

  [[nodiscard]] double t_min() const noexcept { return t_.front(); }
  [[nodiscard]] double t_max() const noexcept { return t_.back(); }
  [[nodiscard]] bool periodic() const noexcept { return periodic_; }
  [[nodiscard]] const std::vector<double>& knots() const noexcept { return t_; }

  [[nodiscard]] Value value(double t) const { return eval(t, 0); }
  [[nodiscard]] Value deriv(double t) const { return eval(t, 1); }
  [[nodiscard]] Value deriv2(double t) const { return eval(t, 2); }

  /// Index k of the segment [t_k, t_{k+1}] containing t (clamped, or wrapped when periodic).
  [[nodiscard]] std::size_t segment(double& t) const;

 private:
  Value eval(double t, int order) const;

  std::vector<double> t_;
  std::vector<Value> y_;
  std::vector<Value> m_;  // second derivatives at knots
  bool periodic_;
};

/// Parameters t_k at which the curve with speed |alpha'(t)| = speed(t) reaches
/// uniform arclength, plus the total length. Uses Gauss-Legendre quadrature
/// per knot segment and a safeguarded Newton inversion.
struct ArclengthSamples {
  std::vector<double> params;
  double length = 0.0;
};

ArclengthSamples uniform_arclength_params(const std::vector<double>& knots,
                                          const std::function<double(double)>& speed,
                                          std::size_t n_out, bool closed);

}  // namespace minkiso
