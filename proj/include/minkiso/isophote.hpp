#pragma once

// Isophotes as level sets of the illumination field f(u,v) = <N(u,v), d>:
//   timelike axis   <N,d> = -cosh(theta)
//   spacelike axis  <N,d> =  sinh(theta)

#include <cstddef>
#include <string>
#include <vector>

#include "minkiso/minkowski.hpp"
#include "minkiso/surface.hpp"

namespace minkiso {

enum class AxisKind { Timelike, Spacelike };

std::string_view to_string(AxisKind kind) noexcept;

struct AxisSpec {
  Vec3M d;  // <d,d> = -1 (timelike, future-pointing) or +1 (spacelike)
  AxisKind kind = AxisKind::Timelike;
  double theta = 0.0;
  bool flipped = false;  // a past-pointing timelike d was replaced by -d

  /// Normalizes d, checks it against `kind`, flips a past-pointing timelike d.
  /// Throws SilhouetteUndefined for theta == 0 and InvalidArgument otherwise.
  static AxisSpec make(const Vec3M& d, AxisKind kind, double theta);

  [[nodiscard]] double level() const;
};

struct GuardResult {
  bool accepted = false;
  std::string note;
};

/// Throws SilhouetteUndefined when theta == 0 for either kind.
GuardResult silhouette_guard(AxisKind kind, double theta);
inline GuardResult silhouette_guard(const AxisSpec& axis) { return silhouette_guard(axis.kind, axis.theta); }

/// Node values on the parameter grid. Periodic directions omit the far end.
struct ScalarGrid {
  std::size_t nu = 0, nv = 0;
  Domain domain;
  bool periodic_u = false, periodic_v = false;
  std::vector<double> values;  // row-major in u

  [[nodiscard]] double at(std::size_t i, std::size_t j) const { return values[i * nv + j]; }
  [[nodiscard]] double u(std::size_t i) const;
  [[nodiscard]] double v(std::size_t j) const;
  [[nodiscard]] double min() const;
  [[nodiscard]] double max() const;
};

/// f = <N,d> on a grid_n x grid_n grid (OpenMP over nodes). Errors are reported
/// for the first failing node in row-major order, independent of scheduling.
ScalarGrid illumination_field(const ParamSurface& surface, const Vec3M& d, std::size_t grid_n);
/// Serial reference for illumination_field.
ScalarGrid illumination_field_serial(const ParamSurface& surface, const Vec3M& d, std::size_t grid_n);

struct IsophotePolyline {
  AxisSpec axis;
  double level = 0.0;
  /// Refined level-set vertices in the canonical domain; closed paths repeat the first vertex.
  std::vector<UV> path;
  bool closed = false;
  /// Arclength-resampled curve, projected back onto the level set.
  SurfaceCurve curve;

  [[nodiscard]] const SampledCurve& trace() const noexcept { return curve.trace; }
};

struct ExtractOptions {
  /// Resampled trace size; 0 picks clamp(2 * vertices, 64, 4096), raised (up to 4096)
  /// when a chord of the trace turns by more than 0.01 rad.
  std::size_t samples = 0;
};

struct ExtractStats {
  std::size_t crossing_edges = 0;
  std::size_t saddle_cells = 0;
  std::size_t dropped_chains = 0;  // fewer than 4 distinct vertices
  double field_min = 0.0, field_max = 0.0;
};

/// Marching squares on the illumination field, edge roots refined to |f - level| <= refine_tol,
/// segments chained into maximal polylines. An unreachable level gives an empty list.
std::vector<IsophotePolyline> extract_isophotes(const ParamSurface& surface, const AxisSpec& axis,
                                                std::size_t grid_n, double refine_tol,
                                                const ExtractOptions& opts = {}, ExtractStats* stats = nullptr);

/// Newton projection of (u,v) onto f = level along the parameter gradient of f. Iterates
/// until |f - level| <= tol or the residual stops decreasing.
UV project_to_level(const ParamSurface& surface, const Vec3M& d, double level, UV q, double tol);

}  // namespace minkiso
