#pragma once

// Closed-form oracles and fixture builders shared by the unit tests.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <stdexcept>

#include "minkiso/error.hpp"
#include "minkiso/surface.hpp"

namespace testsupport {

using minkiso::UV;
using minkiso::Vec3M;

// Kind of the minkiso::Error thrown by f; std::logic_error when nothing is thrown.
template <typename F>
minkiso::ErrorKind thrown_kind(F&& f) {
  try {
    f();
  } catch (const minkiso::Error& e) {
    return e.kind();
  }
  throw std::logic_error("expected a minkiso::Error");
}

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double coth(double x) { return std::cosh(x) / std::sinh(x); }

inline minkiso::ParamSurface hyperboloid() { return minkiso::builtin_surface("hyperboloid"); }

inline minkiso::ParamSurface hyperboloid_expr() {
  return minkiso::parse_surface_expr("cosh(u), sinh(u)*cos(v), sinh(u)*sin(v)", {0.1, 2.0, 0.0, kTwoPi}, false,
                                     true);
}

// (cosh u, sinh u cos v, sinh u sin v) written out independently of the library.
inline Vec3M hyperboloid_point(double u, double v) {
  return {std::cosh(u), std::sinh(u) * std::cos(v), std::sinh(u) * std::sin(v)};
}

// Latitude u = u0, sampled with m parameter vertices (closed, no repeat).
inline minkiso::SurfaceCurve latitude(const minkiso::ParamSurface& s, double u0, std::size_t m, std::size_t n_out) {
  std::vector<UV> path;
  for (std::size_t k = 0; k < m; ++k) path.push_back({u0, kTwoPi * static_cast<double>(k) / static_cast<double>(m)});
  return minkiso::make_surface_curve(s, path, true, n_out);
}

// Meridian v = v0 for u in [a, b].
inline minkiso::SurfaceCurve meridian(const minkiso::ParamSurface& s, double v0, double a, double b, std::size_t m,
                                      std::size_t n_out) {
  std::vector<UV> path;
  for (std::size_t k = 0; k < m; ++k) path.push_back({a + (b - a) * static_cast<double>(k) / (m - 1.0), v0});
  return minkiso::make_surface_curve(s, path, false, n_out);
}

// Darboux data with prescribed curvatures and an arbitrary valid frame.
inline minkiso::DarbouxData synthetic_darboux(std::size_t n, double k_n, double k_g, double tau_g, double dk_n = 0.0,
                                              double dtau_g = 0.0) {
  minkiso::DarbouxData dd;
  dd.spacing = 0.01;
  for (std::size_t i = 0; i < n; ++i) {
    dd.s.push_back(0.01 * static_cast<double>(i));
    dd.path.push_back({0.0, 0.0});
    dd.T.push_back(Vec3M(0, 1, 0));
    dd.B.push_back(Vec3M(0, 0, 1));
    dd.N.push_back(Vec3M(1, 0, 0));
    dd.k_n.push_back(k_n);
    dd.k_g.push_back(k_g);
    dd.tau_g.push_back(tau_g);
    dd.dk_n.push_back(dk_n);
    dd.dtau_g.push_back(dtau_g);
    dd.k_n_alt.push_back(k_n);
    dd.tau_g_alt.push_back(tau_g);
    dd.phi.emplace_back();
  }
  return dd;
}

inline double max_abs_diff(const std::vector<double>& a, double value) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x - value));
  return m;
}

// Middle part of an open curve, away from the one-sided stencils.
template <typename F>
double interior_max(std::size_t n, std::size_t margin, F&& f) {
  double m = 0.0;
  for (std::size_t i = margin; i + margin < n; ++i) m = std::max(m, std::abs(f(i)));
  return m;
}

}  // namespace testsupport
