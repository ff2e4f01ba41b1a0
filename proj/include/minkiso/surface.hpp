#pragma once

// Parametric spacelike surfaces S(u,v) in E_1^3 and the Darboux apparatus of
// curves lying on them:
//   T' = k_g B + k_n N,  B' = -k_g T + tau_g N,  N' = k_n T + tau_g B,
// with B = N x T, <T,T> = <B,B> = 1 and <N,N> = -1.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "minkiso/frames.hpp"
#include "minkiso/minkowski.hpp"

namespace minkiso {

struct UV {
  double u = 0.0;
  double v = 0.0;
  friend bool operator==(const UV&, const UV&) = default;
};

struct Domain {
  double u0 = 0.0, u1 = 1.0, v0 = 0.0, v1 = 1.0;
  [[nodiscard]] double u_span() const noexcept { return u1 - u0; }
  [[nodiscard]] double v_span() const noexcept { return v1 - v0; }
};

struct SurfaceJet {
  Vec3M S, Su, Sv, Suu, Suv, Svv;
};

enum class JetSource { Analytic, FiniteDifference };

class ParamSurface {
 public:
  using EvalFn = std::function<Vec3M(double, double)>;
  using JetFn = std::function<SurfaceJet(double, double)>;

  /// Analytic jets.
  ParamSurface(std::string name, JetFn jet, Domain domain, bool periodic_u, bool periodic_v);
  /// Jets by Richardson-extrapolated central differences of `eval`.
  static ParamSurface from_evaluator(std::string name, EvalFn eval, Domain domain, bool periodic_u,
                                     bool periodic_v);

  [[nodiscard]] Vec3M eval(double u, double v) const;
  [[nodiscard]] SurfaceJet jet(double u, double v) const;

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] const Domain& domain() const noexcept { return domain_; }
  [[nodiscard]] bool periodic_u() const noexcept { return periodic_u_; }
  [[nodiscard]] bool periodic_v() const noexcept { return periodic_v_; }
  [[nodiscard]] JetSource jet_source() const noexcept { return source_; }

  /// Euclidean bounding-box diagonal of the image, sampled on a coarse grid.
  [[nodiscard]] double diameter() const noexcept { return diameter_; }

 private:
  ParamSurface() = default;
  void compute_diameter();

  std::string name_;
  EvalFn eval_;
  JetFn jet_;
  Domain domain_;
  bool periodic_u_ = false;
  bool periodic_v_ = false;
  JetSource source_ = JetSource::Analytic;
  double diameter_ = 0.0;
};

using SurfaceParams = std::map<std::string, double, std::less<>>;

/// Catalog: "hyperboloid", "spacelike_graph", "spacelike_revolution" (see README for parameters).
ParamSurface builtin_surface(std::string_view name, const SurfaceParams& params = {},
                             std::optional<Domain> domain = std::nullopt);

/// Three comma-separated component expressions in u and v.
ParamSurface parse_surface_expr(std::string_view src, Domain domain = {}, bool periodic_u = false,
                                bool periodic_v = false);

/// Future-pointing unit timelike normal (S_u x S_v) / |S_u x S_v|.
/// Throws CellError(DegenerateJacobian | NotTimelikeNormal).
Vec3M surface_normal(const ParamSurface& surface, double u, double v);

struct NormalJet {
  Vec3M N, Nu, Nv;
};
/// Normal and its parameter derivatives from the second-order jets.
NormalJet normal_jet(const ParamSurface& surface, double u, double v);

/// Grid node coordinate along one axis; periodic axes exclude the far end.
double grid_coordinate(double lo, double hi, std::size_t n, bool periodic, std::size_t k) noexcept;

struct SpacelikeReport {
  bool pass = false;
  std::size_t grid_n = 0;
  double min_E = 0.0;
  double min_det = 0.0;            // min EG - F^2
  double min_normal_margin = 0.0;  // min -<W,W>/|W|_E^2 with W = S_u x S_v
  std::size_t failing_nodes = 0;
  struct Cell {
    std::size_t i = 0, j = 0;
    double u = 0.0, v = 0.0;
    std::string reason;
  };
  std::optional<Cell> failure;  // first failing node in row-major order
};

/// Grid check of the spacelike conditions E > 0, EG - F^2 > 0 and a
/// timelike normal. OpenMP over nodes; result independent of thread count.
SpacelikeReport verify_spacelike(const ParamSurface& surface, std::size_t grid_n);
/// Serial reference implementation of verify_spacelike.
SpacelikeReport verify_spacelike_serial(const ParamSurface& surface, std::size_t grid_n);

/// A curve on a surface: parameter path and arclength-resampled 3D trace,
/// sample for sample.
struct SurfaceCurve {
  ParamSurface surface;
  std::vector<UV> path;
  SampledCurve trace;
};

using UVProjector = std::function<UV(UV)>;

/// Cubic spline through the parameter-space vertices (knots at cumulative 3D chord
/// length), resampled at uniform Minkowski arclength. When `project` is given every
/// resampled point is mapped through it and the resampling is repeated once on the
/// projected points.
SurfaceCurve make_surface_curve(const ParamSurface& surface, std::span<const UV> vertices, bool closed,
                                std::size_t n_out, const UVProjector& project = {});

/// Locates 3D points on the surface (Gauss-Newton) and builds the surface curve.
/// Throws Error(OffSurface) when a point is farther than 1e-8 * diameter from the surface.
SurfaceCurve surface_curve_from_points(const ParamSurface& surface, std::span<const Vec3M> points,
                                       bool closed, std::size_t n_out);

struct DarbouxData {
  std::vector<double> s;
  double spacing = 0.0;
  bool closed = false;
  std::vector<UV> path;
  std::vector<Vec3M> T, B, N;
  std::vector<double> k_n, k_g, tau_g;
  std::vector<double> dk_n, dtau_g;
  /// Second extraction route: -<T',N> and -<B',N>.
  std::vector<double> k_n_alt, tau_g_alt;
  /// Angle from N to the Frenet principal normal n in the normal plane,
  /// sinh(phi) = <n,B>; present only where n is timelike.
  std::vector<std::optional<double>> phi;
  /// Frenet apparatus of the trace when it could be built.
  std::optional<FrenetData> frenet;

  [[nodiscard]] std::size_t size() const noexcept { return T.size(); }
};

DarbouxData darboux_apparatus(const SurfaceCurve& curve);

struct RelationReport {
  int epsilon = 1;
  std::size_t samples = 0;
  /// max |k_g^2 - k_n^2 - eps kappa^2|
  double curvature_residual = 0.0;
  bool angle_relations_applicable = false;  // eps == -1
  double k_n_residual = 0.0;                // max |k_n - kappa cosh phi|
  double k_g_residual = 0.0;                // max |k_g - kappa sinh phi|
  /// max |tau_g - (tau - phi')|: the form consistent with b = n x t.
  double tau_g_residual = 0.0;
  /// max |tau_g - (tau + phi')|; equals tau_g_residual up to 2|phi'|.
  double tau_g_residual_literal = 0.0;
};

RelationReport relation_check(const DarbouxData& darboux, const FrenetData& frenet);

struct AsymptoticReport {
  bool applicable = false;  // eps == -1
  bool pass = true;
  double worst_margin = 0.0;  // min |k_n| - kappa
  std::size_t samples = 0;
  std::string note;
};

/// Along curves with timelike principal normal |k_n| >= kappa (no asymptotic curves).
AsymptoticReport no_asymptotic_check(const DarbouxData& darboux, const FrenetData& frenet,
                                     double tol = 1e-6);

}  // namespace minkiso
