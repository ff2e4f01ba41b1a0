#pragma once

// Frenet apparatus of unit-speed spacelike curves in E_1^3:
//   t' = kappa n,  n' = -eps kappa t + tau b,  b' = tau n,
// with <t,t> = 1, <n,n> = eps, <b,b> = -eps.

#include <cstddef>
#include <span>
#include <vector>

#include "minkiso/minkowski.hpp"

namespace minkiso {

/// Arclength-sampled curve on a uniform grid. Closed curves do not repeat the
/// first sample; the spacing is then length / size().
struct SampledCurve {
  std::vector<double> s;
  std::vector<Vec3M> p;
  bool closed = false;
  double length = 0.0;

  [[nodiscard]] std::size_t size() const noexcept { return p.size(); }
  [[nodiscard]] double spacing() const noexcept {
    return closed ? length / static_cast<double>(p.size()) : length / static_cast<double>(p.size() - 1);
  }
};

struct FrenetData {
  std::vector<Vec3M> t, n, b;
  std::vector<double> kappa;
  std::vector<double> tau;
  int epsilon = 1;  // <n,n>
  std::vector<double> sigma;
  double spacing = 0.0;
  bool closed = false;
};

struct FrenetOptions {
  /// kappa_min = kappa_min_scale / length
  double kappa_min_scale = 1e-8;
  /// relative band around <alpha'',alpha''> = 0 treated as a null principal normal
  double null_tol = 1e-6;
};

/// Cumulative-chord cubic spline through `points`, resampled to `n_out` samples
/// at uniform Minkowski arclength. Needs >= 4 distinct points joined by spacelike chords.
SampledCurve arclength_resample(std::span<const Vec3M> points, std::size_t n_out, bool closed);

FrenetData frenet_apparatus(const SampledCurve& curve, const FrenetOptions& opts = {});

/// sigma = kappa^2 / (kappa^2 + tau^2)^{3/2} * (tau/kappa)'
std::vector<double> slant_helix_sigma(std::span<const double> kappa, std::span<const double> tau,
                                      double h, bool periodic);
std::vector<double> slant_helix_sigma(const FrenetData& frenet);

/// stddev / (1 + |mean|)
double constancy_cv(std::span<const double> values);

/// Constancy of sigma: cv(sigma) <= tol. Read together with `frenet.epsilon`;
/// the characterization concerns curves with timelike principal normal.
bool is_slant_helix(std::span<const double> sigma, double tol);
bool is_slant_helix(const FrenetData& frenet, double tol);

}  // namespace minkiso
