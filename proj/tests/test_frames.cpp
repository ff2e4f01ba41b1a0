#include <doctest.h>

#include <cmath>

#include "minkiso/error.hpp"
#include "minkiso/finite_diff.hpp"
#include "minkiso/frames.hpp"
#include "minkiso/spline.hpp"
#include "support.hpp"

using namespace minkiso;
using testsupport::kTwoPi;

namespace {

// Unit-speed samples of f(s) on [0, L]; closed curves drop the endpoint.
template <typename F>
SampledCurve sample(F&& f, double length, std::size_t n, bool closed) {
  SampledCurve c;
  c.closed = closed;
  c.length = length;
  const double h = closed ? length / static_cast<double>(n) : length / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    c.s.push_back(h * static_cast<double>(i));
    c.p.push_back(f(c.s.back()));
  }
  return c;
}

// (a cosh(ws), a sinh(ws), b s) with a^2 w^2 + b^2 = 1: eps = -1, kappa = a w^2, tau = b w.
// Centered on s = 0 to keep coordinates small.
struct HyperbolicHelix {
  double a = 1.0, w = 0.8, s0 = 1.5;
  double b = std::sqrt(1.0 - a * a * w * w);
  Vec3M operator()(double s) const {
    const double x = s - s0;
    return {a * std::cosh(w * x), a * std::sinh(w * x), b * x};
  }
};

double frame_defect(const FrenetData& f) {
  double m = 0.0;
  const double e = f.epsilon;
  for (std::size_t i = 0; i < f.t.size(); ++i) {
    m = std::max({m, std::abs(inner(f.t[i], f.t[i]) - 1.0), std::abs(inner(f.n[i], f.n[i]) - e),
                  std::abs(inner(f.b[i], f.b[i]) + e), std::abs(inner(f.t[i], f.n[i])),
                  std::abs(inner(f.t[i], f.b[i])), std::abs(inner(f.n[i], f.b[i]))});
  }
  return m;
}

// max residual of t' = kappa n, n' = -eps kappa t + tau b, b' = tau n away from open ends
double frenet_equation_residual(const FrenetData& f) {
  const auto dt = fd::derivative<Vec3M>(f.t, f.spacing, f.closed);
  const auto dn = fd::derivative<Vec3M>(f.n, f.spacing, f.closed);
  const auto db = fd::derivative<Vec3M>(f.b, f.spacing, f.closed);
  const std::size_t margin = f.closed ? 0 : 4;
  double m = 0.0;
  for (std::size_t i = margin; i + margin < f.t.size(); ++i) {
    const double k = f.kappa[i], t = f.tau[i], e = f.epsilon;
    m = std::max({m, euclid_norm(dt[i] - k * f.n[i]), euclid_norm(dn[i] - (-e * k * f.t[i] + t * f.b[i])),
                  euclid_norm(db[i] - t * f.n[i])});
  }
  return m;
}

}  // namespace

TEST_CASE("arclength_resample of a straight segment is uniform") {
  std::vector<Vec3M> pts;
  for (int k = 0; k <= 6; ++k) pts.push_back(Vec3M(0, k / 6.0, 0));
  const SampledCurve c = arclength_resample(pts, 11, false);
  REQUIRE(c.size() == 11);
  CHECK(c.length == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < 11; ++i) {
    CHECK(c.p[i].x2() == doctest::Approx(0.1 * static_cast<double>(i)).epsilon(1e-12));
    CHECK(std::abs(c.p[i].x1()) <= 1e-14);
    CHECK(c.s[i] == doctest::Approx(0.1 * static_cast<double>(i)).epsilon(1e-12));
  }
}

TEST_CASE("arclength_resample keeps the latitude circumference") {
  std::vector<Vec3M> pts;
  for (int k = 0; k < 64; ++k) pts.push_back(testsupport::hyperboloid_point(1.0, kTwoPi * k / 64.0));
  const SampledCurve c = arclength_resample(pts, 256, true);
  CHECK(c.size() == 256);
  CHECK(std::abs(c.length / (kTwoPi * std::sinh(1.0)) - 1.0) <= 1e-6);
  // chords within 10% of each other
  double lo = 1e300, hi = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vec3M d = c.p[(i + 1) % c.size()] - c.p[i];
    lo = std::min(lo, norm(d));
    hi = std::max(hi, norm(d));
  }
  CHECK(hi <= 1.1 * lo);
}

TEST_CASE("arclength_resample input errors") {
  const std::vector<Vec3M> two{Vec3M(0, 0, 0), Vec3M(0, 1, 0)};
  CHECK(testsupport::thrown_kind([&] { (void)arclength_resample(two, 10, false); }) == ErrorKind::TooFewPoints);
  const std::vector<Vec3M> timelike{Vec3M(0, 0, 0), Vec3M(1, 0.1, 0), Vec3M(2, 0.2, 0), Vec3M(3, 0.3, 0)};
  CHECK(testsupport::thrown_kind([&] { (void)arclength_resample(timelike, 10, false); }) ==
        ErrorKind::NonSpacelikeChord);
}

TEST_CASE("periodic cubic spline") {
  std::vector<double> t;
  std::vector<std::array<double, 1>> y;
  for (int k = 0; k <= 20; ++k) {
    t.push_back(k * 0.05);
    y.push_back({std::sin(kTwoPi * k * 0.05)});
  }
  const CubicSpline<1> sp(t, y, true);
  for (double x : {0.013, 0.31, 0.77, 0.999}) {
    CHECK(sp.value(x)[0] == doctest::Approx(std::sin(kTwoPi * x)).epsilon(2e-4).scale(1.0));
    CHECK(sp.deriv(x)[0] == doctest::Approx(kTwoPi * std::cos(kTwoPi * x)).epsilon(1e-2).scale(1.0));
  }
  CHECK(sp.value(0.0)[0] == doctest::Approx(sp.value(1.0)[0]));
  CHECK(sp.deriv(0.0)[0] == doctest::Approx(sp.deriv(1.0)[0]));
  CHECK(sp.deriv2(0.0)[0] == doctest::Approx(sp.deriv2(1.0)[0]));
}

TEST_CASE("fourth-order differences") {
  std::vector<double> f;
  const double h = 0.01;
  for (int k = 0; k < 200; ++k) f.push_back(std::exp(h * k));
  const auto d = fd::derivative(f, h, false);
  double m = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) m = std::max(m, std::abs(d[k] - f[k]) / f[k]);
  CHECK(m <= 1e-8);
}

TEST_CASE("planar circle in x1 = 0: kappa 1, tau 0, eps +1") {
  const auto c = sample([](double s) { return Vec3M(0, std::cos(s), std::sin(s)); }, kTwoPi, 400, true);
  const FrenetData f = frenet_apparatus(c);
  CHECK(f.epsilon == 1);
  CHECK(testsupport::max_abs_diff(f.kappa, 1.0) <= 1e-7);
  CHECK(testsupport::max_abs_diff(f.tau, 0.0) <= 1e-7);
  CHECK(frame_defect(f) <= 1e-6);
  CHECK(frenet_equation_residual(f) <= 1e-6);
  CHECK(is_slant_helix(f, 1e-3));
}

TEST_CASE("hyperboloid latitude: kappa = 1/sinh 1, eps +1, sigma 0") {
  const double sh = std::sinh(1.0);
  const auto c = sample([&](double s) { return testsupport::hyperboloid_point(1.0, s / sh); }, kTwoPi * sh, 512,
                        true);
  const FrenetData f = frenet_apparatus(c);
  CHECK(f.epsilon == 1);
  CHECK(testsupport::max_abs_diff(f.kappa, 1.0 / sh) <= 1e-7);
  CHECK(testsupport::max_abs_diff(f.tau, 0.0) <= 1e-7);
  CHECK(testsupport::max_abs_diff(f.sigma, 0.0) <= 1e-6);
  CHECK(is_slant_helix(f, 1e-3));
  CHECK(frame_defect(f) <= 1e-6);
  CHECK(frenet_equation_residual(f) <= 1e-5);
  // cross-module: kappa^2 = k_g^2 - k_n^2 with k_n = 1, k_g = coth 1
  const double cth = testsupport::coth(1.0);
  CHECK(f.kappa[17] * f.kappa[17] == doctest::Approx(cth * cth - 1.0).epsilon(1e-7));
}

TEST_CASE("hyperbolic helix: eps -1, kappa a w^2, tau b w") {
  const HyperbolicHelix hh;
  const auto c = sample(hh, 2.0 * hh.s0, 601, false);
  const FrenetData f = frenet_apparatus(c);
  CHECK(f.epsilon == -1);
  const std::size_t n = f.kappa.size();
  CHECK(testsupport::interior_max(n, 4, [&](std::size_t i) { return f.kappa[i] - hh.a * hh.w * hh.w; }) <= 1e-7);
  CHECK(testsupport::interior_max(n, 4, [&](std::size_t i) { return f.tau[i] - hh.b * hh.w; }) <= 1e-7);
  CHECK(frame_defect(f) <= 1e-6);
  CHECK(frenet_equation_residual(f) <= 1e-5);
  CHECK(is_slant_helix(f, 1e-3));
}

TEST_CASE("slant helix sigma") {
  // kappa = 1, tau = s around s = 0: sigma(0) = 1
  std::vector<double> kappa(101, 1.0), tau(101);
  const double h = 0.01;
  for (int k = 0; k < 101; ++k) tau[k] = h * (k - 50);
  const auto sigma = slant_helix_sigma(kappa, tau, h, false);
  CHECK(sigma[50] == doctest::Approx(1.0).epsilon(1e-10));
  // sigma(s) = 1 / (1 + s^2)^{3/2} is not constant
  CHECK_FALSE(is_slant_helix(sigma, 1e-3));

  // tau / kappa constant: sigma = 0
  std::vector<double> k2(50), t2(50);
  for (int k = 0; k < 50; ++k) {
    k2[k] = 1.0 + 0.3 * std::sin(0.1 * k);
    t2[k] = 2.5 * k2[k];
  }
  CHECK(testsupport::max_abs_diff(slant_helix_sigma(k2, t2, 0.1, false), 0.0) <= 1e-12);

  const std::vector<double> constant(40, 0.5);
  CHECK(is_slant_helix(constant, 1e-3));
  std::vector<double> ramp(101);
  for (int k = 0; k <= 100; ++k) ramp[k] = k / 100.0;
  CHECK_FALSE(is_slant_helix(ramp, 1e-3));
  CHECK(constancy_cv(constant) == 0.0);
}

TEST_CASE("frenet_apparatus rejects degenerate curves") {
  const auto line = sample([](double s) { return Vec3M(0, s, 0.5 * s); }, 2.0, 50, false);
  CHECK(testsupport::thrown_kind([&] { (void)frenet_apparatus(line); }) == ErrorKind::DegenerateCurvature);
  // alpha'' = (1,1,0) is null
  const auto null_normal = sample([](double s) { return Vec3M(0.5 * s * s, 0.5 * s * s, s); }, 1.0, 60, false);
  CHECK(testsupport::thrown_kind([&] { (void)frenet_apparatus(null_normal); }) == ErrorKind::NullPrincipalNormal);
}

TEST_CASE("a principal normal that changes causal character is an error") {
  // (t^3, t, t^2 / 2): <alpha'', alpha''> changes sign near |t| = 1/6
  std::vector<Vec3M> pts;
  for (int k = 0; k <= 200; ++k) {
    const double t = -0.5 + k / 200.0;
    pts.push_back(Vec3M(t * t * t, t, 0.5 * t * t));
  }
  const SampledCurve c = arclength_resample(pts, 301, false);
  CHECK(testsupport::thrown_kind([&] { (void)frenet_apparatus(c); }) == ErrorKind::MixedCurveKind);
}
