#include "minkiso/frames.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "minkiso/error.hpp"
#include "minkiso/finite_diff.hpp"
#include "minkiso/spline.hpp"

namespace minkiso {

SampledCurve arclength_resample(std::span<const Vec3M> points, std::size_t n_out, bool closed) {
  std::vector<Vec3M> pts(points.begin(), points.end());
  if (closed && pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
  if (pts.size() < 4) throw Error(ErrorKind::TooFewPoints, "arclength_resample needs at least 4 points");
  if (n_out < 5) throw Error(ErrorKind::InvalidArgument, "arclength_resample needs n_out >= 5");

  const std::size_t m = pts.size();
  const std::size_t nchord = closed ? m : m - 1;
  std::vector<double> knots{0.0};
  std::vector<std::array<double, 3>> vals{pts[0].components()};
  for (std::size_t i = 0; i < nchord; ++i) {
    const Vec3M& a = pts[i];
    const Vec3M& b = pts[(i + 1) % m];
    const Vec3M chord = b - a;
    if (euclid_dot(chord, chord) == 0.0) {
      throw Error(ErrorKind::InvalidArgument, "consecutive points coincide at index " + std::to_string(i));
    }
    if (causal_character(chord) != CausalCharacter::Spacelike) {
      throw Error(ErrorKind::NonSpacelikeChord, "chord " + std::to_string(i) + " is not spacelike");
    }
    knots.push_back(knots.back() + norm(chord));
    vals.push_back(b.components());
  }

  const CubicSpline<3> spline(knots, vals, closed);
  auto speed = [&](double t) {
    const auto d = spline.deriv(t);
    const Vec3M v = Vec3M::unchecked(d[0], d[1], d[2]);
    return std::sqrt(std::max(0.0, inner(v, v)));
  };
  const ArclengthSamples at = uniform_arclength_params(knots, speed, n_out, closed);

  SampledCurve out;
  out.closed = closed;
  out.length = at.length;
  out.s.resize(n_out);
  out.p.reserve(n_out);
  const double ds = closed ? at.length / static_cast<double>(n_out) : at.length / static_cast<double>(n_out - 1);
  for (std::size_t j = 0; j < n_out; ++j) {
    const auto v = spline.value(at.params[j]);
    out.s[j] = ds * static_cast<double>(j);
    out.p.push_back(Vec3M::unchecked(v[0], v[1], v[2]));
  }
  return out;
}

FrenetData frenet_apparatus(const SampledCurve& curve, const FrenetOptions& opts) {
  const std::size_t n = curve.size();
  if (n < 5) throw Error(ErrorKind::TooFewPoints, "frenet_apparatus needs at least 5 samples");
  const double h = curve.spacing();
  const bool periodic = curve.closed;

  FrenetData fr;
  fr.spacing = h;
  fr.closed = periodic;

  const auto t_raw = fd::derivative<Vec3M>(curve.p, h, periodic);
  fr.t.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double q = inner(t_raw[i], t_raw[i]);
    if (!(q > 0.0)) throw Error(ErrorKind::InvalidArgument, "curve tangent is not spacelike");
    fr.t.push_back(t_raw[i] / std::sqrt(q));
  }

  auto accel = fd::derivative<Vec3M>(fr.t, h, periodic);
  const double kappa_min = opts.kappa_min_scale / curve.length;
  fr.kappa.resize(n);
  fr.n.reserve(n);
  fr.b.reserve(n);
  int eps_seen = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Vec3M a = accel[i] - inner(accel[i], fr.t[i]) * fr.t[i];
    const double q = inner(a, a);
    const double k = std::sqrt(std::abs(q));
    // a lightlike acceleration has kappa = 0 but is not small
    if (euclid_norm(a) >= kappa_min && std::abs(q) <= opts.null_tol * euclid_dot(a, a)) {
      throw Error(ErrorKind::NullPrincipalNormal,
                  "principal normal is lightlike at sample " + std::to_string(i));
    }
    if (k < kappa_min) {
      std::ostringstream os;
      os << "curvature " << k << " below threshold " << kappa_min << " at sample " << i;
      throw Error(ErrorKind::DegenerateCurvature, os.str());
    }
    const int eps = q > 0.0 ? 1 : -1;
    if (eps_seen == 0) {
      eps_seen = eps;
    } else if (eps != eps_seen) {
      throw Error(ErrorKind::MixedCurveKind,
                  "principal normal changes causal character at sample " + std::to_string(i));
    }
    fr.kappa[i] = k;
    fr.n.push_back(a / k);
    fr.b.push_back(cross(fr.n.back(), fr.t[i]));
  }
  fr.epsilon = eps_seen;

  const auto dn = fd::derivative<Vec3M>(fr.n, h, periodic);
  fr.tau.resize(n);
  for (std::size_t i = 0; i < n; ++i) fr.tau[i] = inner(dn[i], fr.b[i]) / static_cast<double>(-fr.epsilon);
  fr.sigma = slant_helix_sigma(fr.kappa, fr.tau, h, periodic);
  return fr;
}

std::vector<double> slant_helix_sigma(std::span<const double> kappa, std::span<const double> tau,
                                      double h, bool periodic) {
  if (kappa.size() != tau.size()) throw Error(ErrorKind::InvalidArgument, "kappa/tau size mismatch");
  std::vector<double> ratio(kappa.size());
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    if (!(kappa[i] > 0.0)) throw Error(ErrorKind::DegenerateCurvature, "slant helix test needs kappa > 0");
    ratio[i] = tau[i] / kappa[i];
  }
  const auto dratio = fd::derivative<double>(ratio, h, periodic);
  std::vector<double> sigma(kappa.size());
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    const double k2 = kappa[i] * kappa[i];
    const double w = k2 + tau[i] * tau[i];
    sigma[i] = k2 / (w * std::sqrt(w)) * dratio[i];
  }
  return sigma;
}

std::vector<double> slant_helix_sigma(const FrenetData& frenet) {
  return slant_helix_sigma(frenet.kappa, frenet.tau, frenet.spacing, frenet.closed);
}

double constancy_cv(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double var = 0.0;
  for (double x : values) var += (x - mean) * (x - mean);
  return std::sqrt(var / n) / (1.0 + std::abs(mean));
}

bool is_slant_helix(std::span<const double> sigma, double tol) { return constancy_cv(sigma) <= tol; }

bool is_slant_helix(const FrenetData& frenet, double tol) { return is_slant_helix(frenet.sigma, tol); }

}  // namespace minkiso
