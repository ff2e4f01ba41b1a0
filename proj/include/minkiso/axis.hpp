#pragma once

// Axis reconstruction for isophotes from Darboux data. With r = sqrt(k_n^2 + tau_g^2)
// and psi = (tau_g' k_n - k_n' tau_g) / r^3 + k_g / r:
//   timelike axis   coth(theta) = -/+ psi,
//                   d = +/- tau_g/r sinh(theta) T -/+ k_n/r sinh(theta) B + cosh(theta) N
//   spacelike axis  tanh(theta) = +/- psi,
//                   d = +/- tau_g/r cosh(theta) T -/+ k_n/r cosh(theta) B - sinh(theta) N
// The upper signs form the Plus branch. r is continued through its zeros with a sign
// (where N' vanishes on the curve) so that (k_n, tau_g) / r stays continuous.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "minkiso/frames.hpp"
#include "minkiso/isophote.hpp"
#include "minkiso/minkowski.hpp"
#include "minkiso/surface.hpp"

namespace minkiso {

enum class SignBranch { Plus, Minus };

std::string_view to_string(SignBranch b) noexcept;

struct AxisFlags {
  bool is_geodesic = false;
  bool is_line_of_curvature = false;
  bool is_slant_helix = false;
  bool psi_constant = false;
  bool omega_constant = false;
};

struct AxisOptions {
  /// cv threshold of psi / omega; use 1e-2 for finite-difference jets.
  double cv_threshold = 1e-3;
  /// samples with k_n^2 + tau_g^2 below this fraction of the maximum are excluded
  double degenerate_fraction = 1e-10;
  double max_excluded_fraction = 0.1;
  /// max|k_g|, max|tau_g| and cv(sigma) thresholds for the flags
  double flag_tol = 1e-6;
  double slant_tol = 1e-3;
  /// |<T,d>| below this counts as orthogonal; |tau| below plane_tol counts as planar
  double t_d_tol = 1e-5;
  double plane_tol = 1e-4;
};

struct AxisReport {
  AxisKind kind = AxisKind::Timelike;
  std::vector<Vec3M> d_samples;
  std::vector<bool> used;  // false for excluded (degenerate) samples
  Vec3M d_mean;
  double residual_max = 0.0;
  /// residual_max of the negated sign branch
  double residual_other = 0.0;
  double theta_hat = 0.0;
  std::vector<double> psi;
  std::vector<double> omega;
  double mean = 0.0;  // mean of psi (= omega) over used samples
  double constancy_cv = 0.0;
  SignBranch sign_branch = SignBranch::Plus;
  AxisFlags flags;
  std::size_t excluded = 0;
  double ds = 0.0;
  bool closed = false;
};

/// Per-sample psi; NaN at degenerate samples (see AxisOptions::degenerate_fraction).
/// Throws Error(DegenerateNormalCurvature) when k_n^2 + tau_g^2 vanishes everywhere.
std::vector<double> psi_function(const DarbouxData& darboux, double degenerate_fraction = 1e-10);
/// Same expression as psi_function, read against tanh(theta).
std::vector<double> omega_function(const DarbouxData& darboux, double degenerate_fraction = 1e-10);

/// Throws NotAnIsophote when psi is not constant (or too many samples are degenerate)
/// and InfeasibleAngle when its mean admits no angle of the requested kind.
AxisReport reconstruct_axis(const DarbouxData& darboux, AxisKind kind, const AxisOptions& opts = {});

/// Per-sample axis for a given angle and branch (no constancy test); useful for
/// negative controls with a fabricated theta.
AxisReport reconstruct_axis_with_theta(const DarbouxData& darboux, AxisKind kind, double theta,
                                       SignBranch branch, const AxisOptions& opts = {});

struct AngleReport {
  std::size_t samples = 0;
  std::size_t flagged = 0;  // vanishing denominator or no real angle
  double theta_mean = 0.0;
  double max_discrepancy = 0.0;  // max |theta_i - theta_hat|
};

/// Per-sample theta from the closed-form angle relation in the report's branch,
/// compared to report.theta_hat. Throws DenominatorVanishes when every sample is flagged.
AngleReport angle_consistency(const DarbouxData& darboux, const AxisReport& report);

/// residual_max <= tol and |d'| <= tol/ds at interior samples. Needs >= 8 samples.
bool verify_axis_constant(const AxisReport& report, double tol);

struct BatteryItem {
  std::string name;
  bool applicable = false;
  bool pass = true;
  std::string note;
};

struct ClassifyReport {
  AxisFlags flags;
  std::optional<int> epsilon;  // absent when no Frenet frame exists
  double max_abs_k_g = 0.0;
  double max_abs_tau_g = 0.0;
  double min_abs_T_d = 0.0;
  double max_abs_T_d = 0.0;
  double min_abs_B_d = 0.0;
  double max_abs_tau = 0.0;
  std::vector<BatteryItem> battery;

  [[nodiscard]] bool all_pass() const;
};

ClassifyReport classify(const DarbouxData& darboux, const std::optional<FrenetData>& frenet,
                        const AxisReport& report, const AxisOptions& opts = {});

struct GaussImageReport {
  double normal_residual = 0.0;    // max |<N,N> + 1|
  double latitude_spread = 0.0;    // max - min of <N,d>
  bool latitude_pass = false;
  bool degenerate = false;         // N' vanishes: the image is a point
  /// max |(1 - psi^2) - <N' x N'', N' x N''> / <N',N'>^3| over used samples
  double curvature_residual = 0.0;
  bool curvature_pass = false;
  bool pass = false;
};

/// Latitude-circle test of the Gauss image with respect to d, and the curvature
/// identity relating the image to psi via finite-difference N', N''.
GaussImageReport gauss_image_check(const DarbouxData& darboux, const Vec3M& d, double tol = 1e-6,
                                   double curvature_tol = 1e-4);
GaussImageReport gauss_image_check(const DarbouxData& darboux, const AxisReport& report, double tol = 1e-6,
                                   double curvature_tol = 1e-4);

/// max |<N'(s), d(s)>| with finite-difference N' and the per-sample axis.
double normal_derivative_orthogonality(const DarbouxData& darboux, const AxisReport& report);
/// max |<N'(s), d>| for a fixed vector d.
double normal_derivative_orthogonality(const DarbouxData& darboux, const Vec3M& d);

}  // namespace minkiso
