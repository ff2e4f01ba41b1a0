#include "minkiso/axis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "minkiso/error.hpp"
#include "minkiso/finite_diff.hpp"

namespace minkiso {

std::string_view to_string(SignBranch b) noexcept { return b == SignBranch::Plus ? "plus" : "minus"; }

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sign_of(SignBranch b) { return b == SignBranch::Plus ? 1.0 : -1.0; }
SignBranch negate(SignBranch b) { return b == SignBranch::Plus ? SignBranch::Minus : SignBranch::Plus; }

struct Stats {
  double mean = 0.0;
  double stddev = 0.0;
  double cv = 0.0;
  std::size_t count = 0;
};

Stats used_stats(const std::vector<double>& v) {
  std::vector<double> kept;
  kept.reserve(v.size());
  for (double x : v) {
    if (std::isfinite(x)) kept.push_back(x);
  }
  Stats s;
  s.count = kept.size();
  if (kept.empty()) return s;
  s.mean = std::accumulate(kept.begin(), kept.end(), 0.0) / static_cast<double>(kept.size());
  double ss = 0.0;
  for (double x : kept) ss += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(ss / static_cast<double>(kept.size()));
  s.cv = constancy_cv(kept);
  return s;
}

// +1/-1 per sample so that (k_n, tau_g)/r stays continuous where r passes through 0.
std::vector<double> radius_signs(const DarbouxData& dd, const std::vector<bool>& used) {
  std::vector<double> sign(dd.size(), 1.0);
  double prev_n = 0.0, prev_t = 0.0, current = 1.0;
  bool have_prev = false;
  for (std::size_t i = 0; i < dd.size(); ++i) {
    if (!used[i]) continue;
    if (have_prev && dd.k_n[i] * prev_n + dd.tau_g[i] * prev_t < 0.0) current = -current;
    sign[i] = current;
    prev_n = dd.k_n[i];
    prev_t = dd.tau_g[i];
    have_prev = true;
  }
  return sign;
}

std::vector<bool> nondegenerate(const DarbouxData& dd, double degenerate_fraction) {
  double max_r2 = 0.0;
  for (std::size_t i = 0; i < dd.size(); ++i) {
    max_r2 = std::max(max_r2, dd.k_n[i] * dd.k_n[i] + dd.tau_g[i] * dd.tau_g[i]);
  }
  if (!(max_r2 > 0.0)) {
    throw Error(ErrorKind::DegenerateNormalCurvature, "k_n^2 + tau_g^2 vanishes along the whole curve");
  }
  std::vector<bool> used(dd.size());
  for (std::size_t i = 0; i < dd.size(); ++i) {
    used[i] = dd.k_n[i] * dd.k_n[i] + dd.tau_g[i] * dd.tau_g[i] >= degenerate_fraction * max_r2;
  }
  return used;
}

struct BranchAxis {
  std::vector<Vec3M> d;
  Vec3M mean;
  double residual = std::numeric_limits<double>::infinity();
};

BranchAxis branch_axis(const DarbouxData& dd, const std::vector<bool>& used, AxisKind kind, double theta,
                       SignBranch branch) {
  const double sg = sign_of(branch);
  const double sh = std::sinh(theta), ch = std::cosh(theta);
  BranchAxis out;
  out.d.resize(dd.size(), Vec3M::unchecked(kNaN, kNaN, kNaN));
  double m[3] = {0.0, 0.0, 0.0};
  std::size_t count = 0;
  const std::vector<double> sign = radius_signs(dd, used);
  for (std::size_t i = 0; i < dd.size(); ++i) {
    if (!used[i]) continue;
    const double r = sign[i] * std::hypot(dd.k_n[i], dd.tau_g[i]);
    const double a = dd.tau_g[i] / r, b = dd.k_n[i] / r;
    const Vec3M d = kind == AxisKind::Timelike ? sg * a * sh * dd.T[i] - sg * b * sh * dd.B[i] + ch * dd.N[i]
                                               : sg * a * ch * dd.T[i] - sg * b * ch * dd.B[i] - sh * dd.N[i];
    out.d[i] = d;
    for (std::size_t c = 0; c < 3; ++c) m[c] += d[c];
    ++count;
  }
  if (count == 0) return out;
  const Vec3M avg = Vec3M::unchecked(m[0], m[1], m[2]) / static_cast<double>(count);
  const double q = inner(avg, avg);
  const bool right_kind = kind == AxisKind::Timelike ? q < 0.0 : q > 0.0;
  if (!right_kind) return out;
  out.mean = avg / std::sqrt(std::abs(q));
  out.residual = 0.0;
  for (std::size_t i = 0; i < dd.size(); ++i) {
    if (used[i]) out.residual = std::max(out.residual, euclid_norm(out.d[i] - out.mean));
  }
  return out;
}

std::vector<bool> usable(const std::vector<double>& psi) {
  std::vector<bool> used(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) used[i] = std::isfinite(psi[i]);
  return used;
}

void fill_flags(AxisReport& rep, const DarbouxData& dd, const AxisOptions& opts) {
  double kg = 0.0, tg = 0.0;
  for (std::size_t i = 0; i < dd.size(); ++i) {
    kg = std::max(kg, std::abs(dd.k_g[i]));
    tg = std::max(tg, std::abs(dd.tau_g[i]));
  }
  rep.flags.is_geodesic = kg <= opts.flag_tol;
  rep.flags.is_line_of_curvature = tg <= opts.flag_tol;
  rep.flags.is_slant_helix = dd.frenet.has_value() && is_slant_helix(*dd.frenet, opts.slant_tol);
  const bool constant = rep.constancy_cv <= opts.cv_threshold;
  rep.flags.psi_constant = constant && std::abs(rep.mean) > 1.0;
  rep.flags.omega_constant = constant && std::abs(rep.mean) < 1.0 && rep.mean != 0.0;
}

AxisReport assemble(const DarbouxData& dd, AxisKind kind, double theta, SignBranch branch,
                    std::vector<double> psi, const Stats& st, const AxisOptions& opts) {
  AxisReport rep;
  rep.kind = kind;
  rep.used = usable(psi);
  rep.excluded = static_cast<std::size_t>(std::count(rep.used.begin(), rep.used.end(), false));
  rep.theta_hat = theta;
  rep.mean = st.mean;
  rep.constancy_cv = st.cv;
  rep.ds = dd.spacing;
  rep.closed = dd.closed;
  BranchAxis chosen = branch_axis(dd, rep.used, kind, theta, branch);
  BranchAxis other = branch_axis(dd, rep.used, kind, theta, negate(branch));
  rep.sign_branch = branch;
  rep.d_samples = std::move(chosen.d);
  rep.d_mean = chosen.mean;
  rep.residual_max = chosen.residual;
  rep.residual_other = other.residual;
  rep.psi = psi;
  rep.omega = std::move(psi);
  fill_flags(rep, dd, opts);
  return rep;
}

}  // namespace

std::vector<double> psi_function(const DarbouxData& dd, double degenerate_fraction) {
  const std::vector<bool> used = nondegenerate(dd, degenerate_fraction);
  const std::vector<double> sign = radius_signs(dd, used);
  std::vector<double> psi(dd.size(), kNaN);
  for (std::size_t i = 0; i < dd.size(); ++i) {
    if (!used[i]) continue;
    const double r2 = dd.k_n[i] * dd.k_n[i] + dd.tau_g[i] * dd.tau_g[i];
    const double r = sign[i] * std::sqrt(r2);
    psi[i] = (dd.dtau_g[i] * dd.k_n[i] - dd.dk_n[i] * dd.tau_g[i]) / (r2 * r) + dd.k_g[i] / r;
  }
  return psi;
}

std::vector<double> omega_function(const DarbouxData& dd, double degenerate_fraction) {
  return psi_function(dd, degenerate_fraction);
}

AxisReport reconstruct_axis(const DarbouxData& dd, AxisKind kind, const AxisOptions& opts) {
  if (dd.size() < 5) throw Error(ErrorKind::InvalidArgument, "reconstruct_axis needs at least 5 samples");
  std::vector<double> psi = psi_function(dd, opts.degenerate_fraction);
  const std::vector<bool> used = usable(psi);
  const auto excluded = static_cast<std::size_t>(std::count(used.begin(), used.end(), false));
  if (static_cast<double>(excluded) > opts.max_excluded_fraction * static_cast<double>(dd.size())) {
    std::ostringstream os;
    os << excluded << " of " << dd.size() << " samples have k_n^2 + tau_g^2 ~ 0";
    throw NotAnIsophote(os.str());
  }
  const Stats st = used_stats(psi);
  const char* name = kind == AxisKind::Timelike ? "psi" : "omega";
  if (st.cv > opts.cv_threshold) {
    std::ostringstream os;
    os << name << " is not constant along the curve: cv = " << st.cv << " > " << opts.cv_threshold
       << " (mean " << st.mean << ")";
    throw NotAnIsophote(os.str());
  }
  double theta = 0.0;
  if (kind == AxisKind::Timelike) {
    if (!(std::abs(st.mean) > 1.0)) {
      std::ostringstream os;
      os << "mean psi = " << st.mean << " but coth(theta) > 1 for a timelike axis";
      throw InfeasibleAngle(os.str());
    }
    theta = std::atanh(1.0 / std::abs(st.mean));
  } else {
    if (!(std::abs(st.mean) < 1.0)) {
      std::ostringstream os;
      os << "mean omega = " << st.mean << " but |tanh(theta)| < 1 for a spacelike axis";
      throw InfeasibleAngle(os.str());
    }
    if (std::abs(st.mean) <= std::max(1e-8, st.stddev)) {
      std::ostringstream os;
      os << "mean omega = " << st.mean << " is indistinguishable from 0 (theta = 0, a silhouette)";
      throw InfeasibleAngle(os.str());
    }
    theta = std::atanh(std::abs(st.mean));
  }

  AxisReport plus = assemble(dd, kind, theta, SignBranch::Plus, psi, st, opts);
  if (plus.residual_other < plus.residual_max) {
    return assemble(dd, kind, theta, SignBranch::Minus, std::move(psi), st, opts);
  }
  return plus;
}

AxisReport reconstruct_axis_with_theta(const DarbouxData& dd, AxisKind kind, double theta, SignBranch branch,
                                       const AxisOptions& opts) {
  if (dd.size() < 5) throw Error(ErrorKind::InvalidArgument, "reconstruct_axis needs at least 5 samples");
  std::vector<double> psi = psi_function(dd, opts.degenerate_fraction);
  const Stats st = used_stats(psi);
  return assemble(dd, kind, theta, branch, std::move(psi), st, opts);
}

AngleReport angle_consistency(const DarbouxData& dd, const AxisReport& report) {
  AngleReport out;
  const double sg = sign_of(report.sign_branch);
  double sum = 0.0;
  std::vector<bool> used = report.used;
  used.resize(dd.size(), true);
  const std::vector<double> sign = radius_signs(dd, used);
  for (std::size_t i = 0; i < dd.size(); ++i) {
    if (!used[i]) continue;
    ++out.samples;
    const double r2 = dd.k_n[i] * dd.k_n[i] + dd.tau_g[i] * dd.tau_g[i];
    const double r3 = sign[i] * r2 * std::sqrt(r2);
    const double den = dd.k_g[i] * r2 + dd.dtau_g[i] * dd.k_n[i] - dd.dk_n[i] * dd.tau_g[i];
    if (!(std::abs(den) > 1e-12 * r3)) {
      ++out.flagged;
      continue;
    }
    double theta = kNaN;
    if (report.kind == AxisKind::Timelike) {
      const double x = -sg * r3 / den;  // tanh(theta)
      if (x > 0.0 && x < 1.0) theta = std::atanh(x);
    } else {
      const double x = sg * r3 / den;  // coth(theta)
      if (x > 1.0) theta = std::atanh(1.0 / x);
    }
    if (!std::isfinite(theta)) {
      ++out.flagged;
      continue;
    }
    sum += theta;
    out.max_discrepancy = std::max(out.max_discrepancy, std::abs(theta - report.theta_hat));
  }
  if (out.flagged == out.samples) {
    throw Error(ErrorKind::DenominatorVanishes, "the angle relation has no usable sample (vanishing denominator)");
  }
  out.theta_mean = sum / static_cast<double>(out.samples - out.flagged);
  return out;
}

bool verify_axis_constant(const AxisReport& report, double tol) {
  const std::size_t n = report.d_samples.size();
  if (n < 8 || !(report.residual_max <= tol)) return false;
  const double bound = tol / report.ds;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t a = 0, b = 0;
    if (report.closed) {
      a = (i + n - 1) % n;
      b = (i + 1) % n;
    } else {
      if (i == 0 || i + 1 == n) continue;
      a = i - 1;
      b = i + 1;
    }
    if (!report.used[a] || !report.used[b]) continue;
    const Vec3M deriv = (report.d_samples[b] - report.d_samples[a]) / (2.0 * report.ds);
    if (!(euclid_norm(deriv) <= bound)) return false;
  }
  return true;
}

bool ClassifyReport::all_pass() const {
  return std::all_of(battery.begin(), battery.end(), [](const BatteryItem& b) { return !b.applicable || b.pass; });
}

ClassifyReport classify(const DarbouxData& dd, const std::optional<FrenetData>& frenet, const AxisReport& report,
                        const AxisOptions& opts) {
  ClassifyReport out;
  out.flags = report.flags;
  out.flags.is_slant_helix = frenet.has_value() && is_slant_helix(*frenet, opts.slant_tol);
  if (frenet) out.epsilon = frenet->epsilon;
  const Vec3M& d = report.d_mean;

  out.min_abs_T_d = out.min_abs_B_d = std::numeric_limits<double>::infinity();
  double nd_sum = 0.0, Nd_sum = 0.0;
  std::vector<double> nd;
  for (std::size_t i = 0; i < dd.size(); ++i) {
    out.max_abs_k_g = std::max(out.max_abs_k_g, std::abs(dd.k_g[i]));
    out.max_abs_tau_g = std::max(out.max_abs_tau_g, std::abs(dd.tau_g[i]));
    const double td = std::abs(inner(dd.T[i], d));
    out.min_abs_T_d = std::min(out.min_abs_T_d, td);
    out.max_abs_T_d = std::max(out.max_abs_T_d, td);
    out.min_abs_B_d = std::min(out.min_abs_B_d, std::abs(inner(dd.B[i], d)));
    Nd_sum += std::abs(inner(dd.N[i], d));
    if (frenet && i < frenet->n.size()) {
      out.max_abs_tau = std::max(out.max_abs_tau, std::abs(frenet->tau[i]));
      nd.push_back(inner(frenet->n[i], d));
      nd_sum += std::abs(nd.back());
    }
  }
  const bool geodesic = out.max_abs_k_g <= opts.flag_tol;
  const bool loc = out.max_abs_tau_g <= opts.flag_tol;
  out.flags.is_geodesic = geodesic;
  out.flags.is_line_of_curvature = loc;
  const bool eps_minus = frenet && frenet->epsilon == -1;
  const std::string eps_note = !frenet ? "no Frenet frame (curvature vanishes or changes type)"
                                       : "principal normal is spacelike (eps = +1)";

  {
    BatteryItem it{"geodesic_iff_slant_helix", eps_minus, true, ""};
    if (eps_minus) {
      const double n_mean = nd_sum / static_cast<double>(nd.size());
      const double N_mean = Nd_sum / static_cast<double>(dd.size());
      const bool about_axis = constancy_cv(nd) <= opts.slant_tol &&
                              std::abs(n_mean - N_mean) <= opts.slant_tol * (1.0 + N_mean);
      const bool slant = out.flags.is_slant_helix && about_axis;
      it.pass = geodesic == slant;
      std::ostringstream os;
      os << "geodesic=" << geodesic << " slant_helix(sigma)=" << out.flags.is_slant_helix
         << " principal normal at constant angle to d=" << about_axis;
      it.note = os.str();
    } else {
      it.note = "not applicable: " + eps_note;
    }
    out.battery.push_back(it);
  }

  if (report.kind == AxisKind::Timelike) {
    BatteryItem loc_item{"timelike_axis_not_line_of_curvature", eps_minus, true, ""};
    if (eps_minus) {
      loc_item.pass = !loc;
      loc_item.note = loc ? "line of curvature with timelike principal normal" : "tau_g does not vanish";
    } else {
      loc_item.note = "not applicable: " + eps_note + (loc ? "; curve is a line of curvature" : "");
    }
    out.battery.push_back(loc_item);

    BatteryItem t_item{"timelike_axis_T_d_nonzero", eps_minus, true, ""};
    if (eps_minus) {
      t_item.pass = out.min_abs_T_d > opts.flag_tol;
    } else {
      t_item.note = "not applicable: relies on the line-of-curvature exclusion above";
    }
    out.battery.push_back(t_item);

    BatteryItem b_item{"timelike_axis_B_d_nonzero", true, out.min_abs_B_d > opts.flag_tol, ""};
    out.battery.push_back(b_item);
  } else {
    const bool t_zero = out.max_abs_T_d <= opts.t_d_tol;
    BatteryItem t_item{"spacelike_axis_T_d_zero_iff_line_of_curvature", true, t_zero == loc, ""};
    std::ostringstream os;
    os << "max|<T,d>|=" << out.max_abs_T_d << " max|tau_g|=" << out.max_abs_tau_g;
    t_item.note = os.str();
    out.battery.push_back(t_item);

    BatteryItem b_item{"spacelike_axis_B_d_nonzero", true, out.min_abs_B_d > opts.flag_tol, ""};
    out.battery.push_back(b_item);

    BatteryItem plane{"spacelike_axis_line_of_curvature_is_planar", loc && frenet.has_value(), true, ""};
    if (plane.applicable) {
      plane.pass = out.max_abs_tau <= opts.plane_tol;
    } else {
      plane.note = loc ? "not applicable: " + eps_note : "not applicable: not a line of curvature";
    }
    out.battery.push_back(plane);
  }

  if (frenet) {
    const AsymptoticReport ar = no_asymptotic_check(dd, *frenet);
    out.battery.push_back({"no_asymptotic_curve", ar.applicable, ar.pass, ar.note});
  }
  return out;
}

GaussImageReport gauss_image_check(const DarbouxData& dd, const Vec3M& d, double tol, double curvature_tol) {
  GaussImageReport rep;
  const std::size_t n = dd.size();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    rep.normal_residual = std::max(rep.normal_residual, std::abs(inner(dd.N[i], dd.N[i]) + 1.0));
    const double nd = inner(dd.N[i], d);
    lo = std::min(lo, nd);
    hi = std::max(hi, nd);
  }
  rep.latitude_spread = hi - lo;
  rep.latitude_pass = rep.latitude_spread <= tol;

  const auto dN = fd::derivative<Vec3M>(dd.N, dd.spacing, dd.closed);
  const auto ddN = fd::derivative<Vec3M>(dN, dd.spacing, dd.closed);
  double max_speed = 0.0;
  for (const Vec3M& v : dN) max_speed = std::max(max_speed, std::abs(inner(v, v)));
  rep.degenerate = max_speed <= 1e-20;
  if (!rep.degenerate) {
    const std::vector<double> psi = psi_function(dd);
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(psi[i])) continue;
      const Vec3M c = cross(dN[i], ddN[i]);
      const double speed2 = inner(dN[i], dN[i]);
      const double image = inner(c, c) / (speed2 * speed2 * speed2);
      rep.curvature_residual = std::max(rep.curvature_residual, std::abs((1.0 - psi[i] * psi[i]) - image));
    }
    rep.curvature_pass = rep.curvature_residual <= curvature_tol;
  }
  rep.pass = rep.latitude_pass && rep.curvature_pass && rep.normal_residual <= tol;
  return rep;
}

GaussImageReport gauss_image_check(const DarbouxData& dd, const AxisReport& report, double tol,
                                   double curvature_tol) {
  return gauss_image_check(dd, report.d_mean, tol, curvature_tol);
}

double normal_derivative_orthogonality(const DarbouxData& dd, const AxisReport& report) {
  const auto dN = fd::derivative<Vec3M>(dd.N, dd.spacing, dd.closed);
  double worst = 0.0;
  for (std::size_t i = 0; i < dd.size(); ++i) {
    if (!report.used[i]) continue;
    worst = std::max(worst, std::abs(inner(dN[i], report.d_samples[i])));
  }
  return worst;
}

double normal_derivative_orthogonality(const DarbouxData& dd, const Vec3M& d) {
  const auto dN = fd::derivative<Vec3M>(dd.N, dd.spacing, dd.closed);
  double worst = 0.0;
  for (const Vec3M& v : dN) worst = std::max(worst, std::abs(inner(v, d)));
  return worst;
}

}  // namespace minkiso
