#include "minkiso/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "minkiso/error.hpp"
#include "minkiso/expr.hpp"
#include "minkiso/finite_diff.hpp"
#include "minkiso/parallel.hpp"
#include "minkiso/spline.hpp"

namespace minkiso {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Step factors (times the domain span) for difference jets.
constexpr double kFirstStep = 1e-5;
constexpr double kSecondStep = 1e-3;

Vec3M richardson(const Vec3M& coarse, const Vec3M& fine, double order_factor) {
  return (order_factor * fine - coarse) / (order_factor - 1.0);
}

}  // namespace

// ---------------------------------------------------------------------------
// ParamSurface

ParamSurface::ParamSurface(std::string name, JetFn jet, Domain domain, bool periodic_u, bool periodic_v)
    : name_(std::move(name)),
      jet_(std::move(jet)),
      domain_(domain),
      periodic_u_(periodic_u),
      periodic_v_(periodic_v),
      source_(JetSource::Analytic) {
  if (!(domain_.u1 > domain_.u0) || !(domain_.v1 > domain_.v0)) {
    throw Error(ErrorKind::BadParams, "surface domain must have u1 > u0 and v1 > v0");
  }
  auto j = jet_;
  eval_ = [j](double u, double v) { return j(u, v).S; };
  compute_diameter();
}

ParamSurface ParamSurface::from_evaluator(std::string name, EvalFn eval, Domain domain, bool periodic_u,
                                          bool periodic_v) {
  if (!(domain.u1 > domain.u0) || !(domain.v1 > domain.v0)) {
    throw Error(ErrorKind::BadParams, "surface domain must have u1 > u0 and v1 > v0");
  }
  ParamSurface s;
  s.name_ = std::move(name);
  s.eval_ = eval;
  s.domain_ = domain;
  s.periodic_u_ = periodic_u;
  s.periodic_v_ = periodic_v;
  s.source_ = JetSource::FiniteDifference;
  const double hu1 = kFirstStep * domain.u_span();
  const double hv1 = kFirstStep * domain.v_span();
  const double hu2 = kSecondStep * domain.u_span();
  const double hv2 = kSecondStep * domain.v_span();
  s.jet_ = [eval, hu1, hv1, hu2, hv2](double u, double v) {
    SurfaceJet j;
    j.S = eval(u, v);
    auto d_u = [&](double h) { return (eval(u + h, v) - eval(u - h, v)) / (2.0 * h); };
    auto d_v = [&](double h) { return (eval(u, v + h) - eval(u, v - h)) / (2.0 * h); };
    j.Su = richardson(d_u(hu1), d_u(0.5 * hu1), 4.0);
    j.Sv = richardson(d_v(hv1), d_v(0.5 * hv1), 4.0);
    auto d_uu = [&](double h) { return (eval(u + h, v) - 2.0 * j.S + eval(u - h, v)) / (h * h); };
    auto d_vv = [&](double h) { return (eval(u, v + h) - 2.0 * j.S + eval(u, v - h)) / (h * h); };
    auto d_uv = [&](double h, double k) {
      return (eval(u + h, v + k) - eval(u + h, v - k) - eval(u - h, v + k) + eval(u - h, v - k)) /
             (4.0 * h * k);
    };
    j.Suu = richardson(d_uu(hu2), d_uu(0.5 * hu2), 4.0);
    j.Svv = richardson(d_vv(hv2), d_vv(0.5 * hv2), 4.0);
    j.Suv = richardson(d_uv(hu2, hv2), d_uv(0.5 * hu2, 0.5 * hv2), 4.0);
    return j;
  };
  s.compute_diameter();
  return s;
}

Vec3M ParamSurface::eval(double u, double v) const { return eval_(u, v); }

SurfaceJet ParamSurface::jet(double u, double v) const { return jet_(u, v); }

void ParamSurface::compute_diameter() {
  constexpr std::size_t n = 17;
  double lo[3] = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
                  std::numeric_limits<double>::max()};
  double hi[3] = {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
                  std::numeric_limits<double>::lowest()};
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double u = domain_.u0 + domain_.u_span() * static_cast<double>(i) / (n - 1);
      const double v = domain_.v0 + domain_.v_span() * static_cast<double>(j) / (n - 1);
      try {
        const Vec3M p = eval_(u, v);
        for (std::size_t c = 0; c < 3; ++c) {
          lo[c] = std::min(lo[c], p[c]);
          hi[c] = std::max(hi[c], p[c]);
        }
        any = true;
      } catch (const Error&) {
        // points outside the expression's natural domain do not contribute
      }
    }
  }
  if (!any) {
    diameter_ = 1.0;
    return;
  }
  const double dx = hi[0] - lo[0], dy = hi[1] - lo[1], dz = hi[2] - lo[2];
  diameter_ = std::max(std::sqrt(dx * dx + dy * dy + dz * dz), 1e-300);
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

double param(const SurfaceParams& params, std::string_view key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void check_params(std::string_view surface, const SurfaceParams& params,
                  std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : params) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(ErrorKind::BadParams, "unknown parameter '" + key + "' for surface " + std::string(surface));
    }
    if (!std::isfinite(value)) {
      throw Error(ErrorKind::BadParams, "parameter '" + key + "' must be finite");
    }
  }
}

}  // namespace

ParamSurface builtin_surface(std::string_view name, const SurfaceParams& params, std::optional<Domain> domain) {
  if (name == "hyperboloid") {
    check_params(name, params, {"radius"});
    const double r = param(params, "radius", 1.0);
    if (!(r > 0.0)) throw Error(ErrorKind::BadParams, "hyperboloid radius must be positive");
    auto jet = [r](double u, double v) {
      const double ch = std::cosh(u), sh = std::sinh(u), c = std::cos(v), s = std::sin(v);
      SurfaceJet j;
      j.S = Vec3M::unchecked(r * ch, r * sh * c, r * sh * s);
      j.Su = Vec3M::unchecked(r * sh, r * ch * c, r * ch * s);
      j.Sv = Vec3M::unchecked(0.0, -r * sh * s, r * sh * c);
      j.Suu = j.S;
      j.Suv = Vec3M::unchecked(0.0, -r * ch * s, r * ch * c);
      j.Svv = Vec3M::unchecked(0.0, -r * sh * c, -r * sh * s);
      return j;
    };
    return ParamSurface("hyperboloid", jet, domain.value_or(Domain{0.1, 2.0, 0.0, kTwoPi}), false, true);
  }

  if (name == "spacelike_graph") {
    check_params(name, params, {"c", "gu", "gv", "huu", "huv", "hvv", "amp", "ku", "kv", "phase"});
    const double c0 = param(params, "c", 0.0), gu = param(params, "gu", 0.0), gv = param(params, "gv", 0.0);
    const double huu = param(params, "huu", 0.0), huv = param(params, "huv", 0.0),
                 hvv = param(params, "hvv", 0.0);
    const double amp = param(params, "amp", 0.0), ku = param(params, "ku", 0.0), kv = param(params, "kv", 0.0),
                 phase = param(params, "phase", 0.0);
    auto jet = [=](double u, double v) {
      const double arg = ku * u + kv * v + phase;
      const double sn = std::sin(arg), cs = std::cos(arg);
      const double f = c0 + gu * u + gv * v + 0.5 * (huu * u * u + 2.0 * huv * u * v + hvv * v * v) + amp * sn;
      const double fu = gu + huu * u + huv * v + amp * ku * cs;
      const double fv = gv + huv * u + hvv * v + amp * kv * cs;
      SurfaceJet j;
      j.S = Vec3M::unchecked(f, u, v);
      j.Su = Vec3M::unchecked(fu, 1.0, 0.0);
      j.Sv = Vec3M::unchecked(fv, 0.0, 1.0);
      j.Suu = Vec3M::unchecked(huu - amp * ku * ku * sn, 0.0, 0.0);
      j.Suv = Vec3M::unchecked(huv - amp * ku * kv * sn, 0.0, 0.0);
      j.Svv = Vec3M::unchecked(hvv - amp * kv * kv * sn, 0.0, 0.0);
      return j;
    };
    return ParamSurface("spacelike_graph", jet, domain.value_or(Domain{-1.0, 1.0, -1.0, 1.0}), false, false);
  }

  if (name == "spacelike_revolution") {
    check_params(name, params, {"a"});
    const double a = param(params, "a", 0.5);
    auto jet = [a](double u, double v) {
      const double c = std::cos(v), s = std::sin(v);
      SurfaceJet j;
      j.S = Vec3M::unchecked(0.5 * a * u * u, u * c, u * s);
      j.Su = Vec3M::unchecked(a * u, c, s);
      j.Sv = Vec3M::unchecked(0.0, -u * s, u * c);
      j.Suu = Vec3M::unchecked(a, 0.0, 0.0);
      j.Suv = Vec3M::unchecked(0.0, -s, c);
      j.Svv = Vec3M::unchecked(0.0, -u * c, -u * s);
      return j;
    };
    return ParamSurface("spacelike_revolution", jet, domain.value_or(Domain{0.1, 1.5, 0.0, kTwoPi}), false,
                        true);
  }

  throw Error(ErrorKind::UnknownSurface, "unknown builtin surface '" + std::string(name) + "'");
}

ParamSurface parse_surface_expr(std::string_view src, Domain domain, bool periodic_u, bool periodic_v) {
  auto comps = parse_component_list(src);
  auto eval = [comps](double u, double v) {
    return Vec3M::unchecked(comps[0].eval(u, v), comps[1].eval(u, v), comps[2].eval(u, v));
  };
  return ParamSurface::from_evaluator("expr", eval, domain, periodic_u, periodic_v);
}

// ---------------------------------------------------------------------------
// Normals

namespace {

struct RawNormal {
  Vec3M W;
  double scale;  // sqrt(-<W,W>)
  double sign;   // +1 or -1 so that sign * W is future-pointing
};

RawNormal raw_normal(const SurfaceJet& j, double u, double v) {
  const Vec3M W = cross(j.Su, j.Sv);
  const double wn = euclid_norm(W);
  if (wn <= 1e-12 * euclid_norm(j.Su) * euclid_norm(j.Sv) || wn == 0.0) {
    std::ostringstream os;
    os << "degenerate Jacobian at (u,v) = (" << u << ", " << v << ")";
    throw CellError(ErrorKind::DegenerateJacobian, u, v, os.str());
  }
  if (causal_character(W) != CausalCharacter::Timelike) {
    std::ostringstream os;
    os << "surface normal is not timelike at (u,v) = (" << u << ", " << v << ")";
    throw CellError(ErrorKind::NotTimelikeNormal, u, v, os.str());
  }
  return {W, std::sqrt(-inner(W, W)), W.x1() >= 0.0 ? 1.0 : -1.0};
}

}  // namespace

Vec3M surface_normal(const ParamSurface& surface, double u, double v) {
  const SurfaceJet j = surface.jet(u, v);
  const RawNormal r = raw_normal(j, u, v);
  return (r.sign / r.scale) * r.W;
}

NormalJet normal_jet(const ParamSurface& surface, double u, double v) {
  const SurfaceJet j = surface.jet(u, v);
  const RawNormal r = raw_normal(j, u, v);
  const Vec3M N = r.W / r.scale;
  const Vec3M Wu = cross(j.Suu, j.Sv) + cross(j.Su, j.Suv);
  const Vec3M Wv = cross(j.Suv, j.Sv) + cross(j.Su, j.Svv);
  // d/du (W/|W|) = (W_u + <N,W_u> N) / |W|
  const Vec3M Nu = (Wu + inner(N, Wu) * N) / r.scale;
  const Vec3M Nv = (Wv + inner(N, Wv) * N) / r.scale;
  return {r.sign * N, r.sign * Nu, r.sign * Nv};
}

double grid_coordinate(double lo, double hi, std::size_t n, bool periodic, std::size_t k) noexcept {
  const double denom = periodic ? static_cast<double>(n) : static_cast<double>(n - 1);
  return lo + (hi - lo) * static_cast<double>(k) / denom;
}

// ---------------------------------------------------------------------------
// Spacelike verification

namespace {

struct NodeCheck {
  double E = 0.0, det = 0.0, margin = 0.0;
  bool ok = false;
  const char* reason = nullptr;
};

NodeCheck check_node(const ParamSurface& surface, double u, double v) {
  NodeCheck c;
  try {
    const SurfaceJet j = surface.jet(u, v);
    c.E = inner(j.Su, j.Su);
    const double F = inner(j.Su, j.Sv);
    const double G = inner(j.Sv, j.Sv);
    c.det = c.E * G - F * F;
    const Vec3M W = cross(j.Su, j.Sv);
    const double w2 = euclid_dot(W, W);
    c.margin = w2 > 0.0 ? -inner(W, W) / w2 : 0.0;
    if (!(c.E > 0.0)) {
      c.reason = "E <= 0";
    } else if (!(c.det > 0.0)) {
      c.reason = "EG - F^2 <= 0";
    } else if (!(c.margin > 0.0)) {
      c.reason = "normal not timelike";
    } else {
      c.ok = true;
    }
  } catch (const Error& e) {
    c.E = c.det = c.margin = std::numeric_limits<double>::quiet_NaN();
    c.reason = "evaluation failed";
  }
  return c;
}

SpacelikeReport reduce_checks(const std::vector<NodeCheck>& checks, std::size_t n, const ParamSurface& surface) {
  SpacelikeReport rep;
  rep.grid_n = n;
  rep.min_E = rep.min_det = rep.min_normal_margin = std::numeric_limits<double>::infinity();
  const Domain& d = surface.domain();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const NodeCheck& c = checks[i * n + j];
      if (!std::isnan(c.E)) {
        rep.min_E = std::min(rep.min_E, c.E);
        rep.min_det = std::min(rep.min_det, c.det);
        rep.min_normal_margin = std::min(rep.min_normal_margin, c.margin);
      }
      if (!c.ok) {
        ++rep.failing_nodes;
        if (!rep.failure) {
          rep.failure = SpacelikeReport::Cell{i, j, grid_coordinate(d.u0, d.u1, n, surface.periodic_u(), i),
                                              grid_coordinate(d.v0, d.v1, n, surface.periodic_v(), j), c.reason};
        }
      }
    }
  }
  rep.pass = rep.failing_nodes == 0;
  return rep;
}

void require_grid(std::size_t grid_n) {
  if (grid_n < 2) throw Error(ErrorKind::InvalidArgument, "verify_spacelike needs grid_n >= 2");
}

}  // namespace

SpacelikeReport verify_spacelike_serial(const ParamSurface& surface, std::size_t grid_n) {
  require_grid(grid_n);
  const Domain& d = surface.domain();
  std::vector<NodeCheck> checks(grid_n * grid_n);
  for (std::size_t i = 0; i < grid_n; ++i) {
    const double u = grid_coordinate(d.u0, d.u1, grid_n, surface.periodic_u(), i);
    for (std::size_t j = 0; j < grid_n; ++j) {
      const double v = grid_coordinate(d.v0, d.v1, grid_n, surface.periodic_v(), j);
      checks[i * grid_n + j] = check_node(surface, u, v);
    }
  }
  return reduce_checks(checks, grid_n, surface);
}

SpacelikeReport verify_spacelike(const ParamSurface& surface, std::size_t grid_n) {
  require_grid(grid_n);
  const Domain& d = surface.domain();
  std::vector<NodeCheck> checks(grid_n * grid_n);
  const auto total = static_cast<std::ptrdiff_t>(grid_n * grid_n);
#pragma omp parallel for num_threads(thread_count()) schedule(static)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const auto i = static_cast<std::size_t>(idx) / grid_n;
    const auto j = static_cast<std::size_t>(idx) % grid_n;
    const double u = grid_coordinate(d.u0, d.u1, grid_n, surface.periodic_u(), i);
    const double v = grid_coordinate(d.v0, d.v1, grid_n, surface.periodic_v(), j);
    checks[static_cast<std::size_t>(idx)] = check_node(surface, u, v);
  }
  return reduce_checks(checks, grid_n, surface);
}

// ---------------------------------------------------------------------------
// Surface curves

namespace {

double nearest_shift(double delta, double period) { return -period * std::round(delta / period); }

}  // namespace

SurfaceCurve make_surface_curve(const ParamSurface& surface, std::span<const UV> vertices, bool closed,
                                std::size_t n_out, const UVProjector& project) {
  const Domain& dom = surface.domain();
  const double pu = dom.u_span(), pv = dom.v_span();

  // Unwrap across periodic seams so consecutive vertices are close in parameter space.
  std::vector<UV> path;
  path.reserve(vertices.size());
  for (const UV& q : vertices) {
    UV w = q;
    if (!path.empty()) {
      if (surface.periodic_u()) w.u += nearest_shift(w.u - path.back().u, pu);
      if (surface.periodic_v()) w.v += nearest_shift(w.v - path.back().v, pv);
    }
    path.push_back(w);
  }

  auto build = [&](std::vector<UV> pts) -> SurfaceCurve {
    // Net parameter drift of a closed loop that winds around a periodic direction.
    UV drift{0.0, 0.0};
    if (closed && pts.size() > 1) {
      if (surface.periodic_u()) drift.u = -nearest_shift(pts.back().u - pts.front().u, pu);
      if (surface.periodic_v()) drift.v = -nearest_shift(pts.back().v - pts.front().v, pv);
      const Vec3M gap = surface.eval(pts.back().u, pts.back().v) - surface.eval(pts.front().u + drift.u,
                                                                              pts.front().v + drift.v);
      if (euclid_norm(gap) <= 1e-12 * surface.diameter()) pts.pop_back();
    }
    // drop repeated vertices
    std::vector<UV> clean;
    std::vector<Vec3M> xyz;
    for (const UV& q : pts) {
      const Vec3M p = surface.eval(q.u, q.v);
      if (!xyz.empty() && euclid_norm(p - xyz.back()) <= 1e-13 * surface.diameter()) continue;
      clean.push_back(q);
      xyz.push_back(p);
    }
    if (clean.size() < 4) throw Error(ErrorKind::TooFewPoints, "surface curve needs at least 4 distinct vertices");

    const std::size_t m = clean.size();
    std::vector<double> knots{0.0};
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const Vec3M chord = xyz[i + 1] - xyz[i];
      if (causal_character(chord) != CausalCharacter::Spacelike) {
        throw Error(ErrorKind::NonSpacelikeChord, "chord " + std::to_string(i) + " is not spacelike");
      }
      knots.push_back(knots.back() + norm(chord));
    }
    if (closed) {
      const Vec3M closing = surface.eval(clean.front().u + drift.u, clean.front().v + drift.v) - xyz.back();
      if (causal_character(closing) != CausalCharacter::Spacelike) {
        throw Error(ErrorKind::NonSpacelikeChord, "closing chord is not spacelike");
      }
      knots.push_back(knots.back() + norm(closing));
    }
    const double period_t = knots.back();
    std::vector<std::array<double, 2>> vals;
    for (std::size_t i = 0; i < knots.size(); ++i) {
      const UV q = i < m ? clean[i] : UV{clean.front().u + drift.u, clean.front().v + drift.v};
      // remove the linear drift so the closed-curve spline is genuinely periodic
      const double f = closed ? knots[i] / period_t : 0.0;
      vals.push_back({q.u - f * drift.u, q.v - f * drift.v});
    }
    const CubicSpline<2> spline(knots, vals, closed);
    auto uv_at = [&](double t) {
      const auto y = spline.value(t);
      const double f = closed ? t / period_t : 0.0;
      return UV{y[0] + f * drift.u, y[1] + f * drift.v};
    };
    auto speed = [&](double t) {
      const UV q = uv_at(t);
      const auto dy = spline.deriv(t);
      const double du = dy[0] + (closed ? drift.u / period_t : 0.0);
      const double dv = dy[1] + (closed ? drift.v / period_t : 0.0);
      const SurfaceJet j = surface.jet(q.u, q.v);
      const Vec3M vel = du * j.Su + dv * j.Sv;
      return std::sqrt(std::max(0.0, inner(vel, vel)));
    };
    const ArclengthSamples at = uniform_arclength_params(knots, speed, n_out, closed);

    SurfaceCurve out{surface, {}, {}};
    out.path.reserve(n_out);
    for (double t : at.params) out.path.push_back(uv_at(t));
    out.trace.closed = closed;
    out.trace.length = at.length;
    return out;
  };

  if (n_out < 5) throw Error(ErrorKind::InvalidArgument, "surface curve needs n_out >= 5");
  SurfaceCurve curve = build(path);
  if (project) {
    for (int pass = 0; pass < 2; ++pass) {
      for (UV& q : curve.path) q = project(q);
      std::vector<UV> pts = curve.path;
      if (closed) pts.push_back(pts.front());
      else {
        // keep the original end vertices so open curves still reach the boundary
        pts.front() = project(path.front());
        pts.back() = project(path.back());
      }
      if (closed) {
        // re-unwrap the duplicated first vertex
        UV& last = pts.back();
        if (surface.periodic_u()) last.u += nearest_shift(last.u - pts[pts.size() - 2].u, pu);
        if (surface.periodic_v()) last.v += nearest_shift(last.v - pts[pts.size() - 2].v, pv);
      }
      curve = build(pts);
    }
    for (UV& q : curve.path) q = project(q);
  }

  const double ds = curve.trace.spacing();
  curve.trace.s.resize(n_out);
  curve.trace.p.reserve(n_out);
  for (std::size_t k = 0; k < n_out; ++k) {
    curve.trace.s[k] = ds * static_cast<double>(k);
    curve.trace.p.push_back(surface.eval(curve.path[k].u, curve.path[k].v));
  }
  return curve;
}

namespace {

// Gauss-Newton on |S(u,v) - p|_E^2.
UV locate(const ParamSurface& surface, const Vec3M& p, UV guess, double& dist) {
  UV q = guess;
  for (int it = 0; it < 50; ++it) {
    const SurfaceJet j = surface.jet(q.u, q.v);
    const Vec3M r = p - j.S;
    const double a11 = euclid_dot(j.Su, j.Su), a12 = euclid_dot(j.Su, j.Sv), a22 = euclid_dot(j.Sv, j.Sv);
    const double b1 = euclid_dot(j.Su, r), b2 = euclid_dot(j.Sv, r);
    const double det = a11 * a22 - a12 * a12;
    if (det <= 0.0) break;
    const double du = (a22 * b1 - a12 * b2) / det;
    const double dv = (a11 * b2 - a12 * b1) / det;
    q.u += du;
    q.v += dv;
    if (std::abs(du) + std::abs(dv) < 1e-15 * (1.0 + std::abs(q.u) + std::abs(q.v))) break;
  }
  dist = euclid_norm(p - surface.eval(q.u, q.v));
  return q;
}

UV seed_by_grid(const ParamSurface& surface, const Vec3M& p) {
  const Domain& d = surface.domain();
  constexpr std::size_t n = 65;
  UV best{d.u0, d.v0};
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double u = grid_coordinate(d.u0, d.u1, n, false, i);
      const double v = grid_coordinate(d.v0, d.v1, n, false, j);
      try {
        const double dd = euclid_norm(surface.eval(u, v) - p);
        if (dd < best_d) {
          best_d = dd;
          best = {u, v};
        }
      } catch (const Error&) {
      }
    }
  }
  return best;
}

}  // namespace

SurfaceCurve surface_curve_from_points(const ParamSurface& surface, std::span<const Vec3M> points, bool closed,
                                       std::size_t n_out) {
  if (points.size() < 4) throw Error(ErrorKind::TooFewPoints, "surface curve needs at least 4 points");
  const double tol = 1e-8 * surface.diameter();
  std::vector<UV> path;
  path.reserve(points.size());
  UV guess = seed_by_grid(surface, points.front());
  for (std::size_t i = 0; i < points.size(); ++i) {
    double dist = 0.0;
    UV q = locate(surface, points[i], guess, dist);
    if (dist > tol) {
      q = locate(surface, points[i], seed_by_grid(surface, points[i]), dist);
    }
    if (dist > tol) {
      std::ostringstream os;
      os << "point " << i << " lies " << dist << " from the surface (tolerance " << tol << ")";
      throw Error(ErrorKind::OffSurface, os.str());
    }
    path.push_back(q);
    guess = q;
  }
  return make_surface_curve(surface, path, closed, n_out);
}

// ---------------------------------------------------------------------------
// Darboux apparatus

DarbouxData darboux_apparatus(const SurfaceCurve& curve) {
  const SampledCurve& tr = curve.trace;
  const std::size_t n = tr.size();
  if (n < 5 || curve.path.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "darboux_apparatus needs >= 5 samples with matching path");
  }
  const double tol = 1e-8 * curve.surface.diameter();
  for (std::size_t i = 0; i < n; ++i) {
    const double off = euclid_norm(tr.p[i] - curve.surface.eval(curve.path[i].u, curve.path[i].v));
    if (off > tol) {
      std::ostringstream os;
      os << "trace sample " << i << " is " << off << " away from the surface";
      throw Error(ErrorKind::OffSurface, os.str());
    }
  }

  DarbouxData d;
  d.s = tr.s;
  d.spacing = tr.spacing();
  d.closed = tr.closed;
  d.path = curve.path;
  const double h = d.spacing;
  const bool periodic = d.closed;

  const auto t_raw = fd::derivative<Vec3M>(tr.p, h, periodic);
  d.N.reserve(n);
  d.T.reserve(n);
  d.B.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3M N = surface_normal(curve.surface, curve.path[i].u, curve.path[i].v);
    const Vec3M t = t_raw[i] + inner(t_raw[i], N) * N;
    const double q = inner(t, t);
    if (!(q > 0.0)) throw Error(ErrorKind::FrameDegenerate, "tangent degenerate at sample " + std::to_string(i));
    const Vec3M T = t / std::sqrt(q);
    d.N.push_back(N);
    d.T.push_back(T);
    d.B.push_back(cross(N, T));
  }

  const auto dN = fd::derivative<Vec3M>(d.N, h, periodic);
  const auto dT = fd::derivative<Vec3M>(d.T, h, periodic);
  const auto dB = fd::derivative<Vec3M>(d.B, h, periodic);
  d.k_n.resize(n);
  d.k_g.resize(n);
  d.tau_g.resize(n);
  d.k_n_alt.resize(n);
  d.tau_g_alt.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.k_n[i] = inner(dN[i], d.T[i]);
    d.tau_g[i] = inner(dN[i], d.B[i]);
    d.k_g[i] = inner(dT[i], d.B[i]);
    d.k_n_alt[i] = -inner(dT[i], d.N[i]);
    d.tau_g_alt[i] = -inner(dB[i], d.N[i]);
  }
  d.dk_n = fd::derivative<double>(d.k_n, h, periodic);
  d.dtau_g = fd::derivative<double>(d.tau_g, h, periodic);

  d.phi.assign(n, std::nullopt);
  try {
    d.frenet = frenet_apparatus(tr);
  } catch (const Error&) {
    d.frenet.reset();
  }
  if (d.frenet && d.frenet->epsilon == -1) {
    for (std::size_t i = 0; i < n; ++i) d.phi[i] = std::asinh(inner(d.frenet->n[i], d.B[i]));
  }
  return d;
}

RelationReport relation_check(const DarbouxData& darboux, const FrenetData& frenet) {
  const std::size_t n = darboux.size();
  if (frenet.kappa.size() != n) throw Error(ErrorKind::InvalidArgument, "Darboux and Frenet sample counts differ");
  RelationReport rep;
  rep.epsilon = frenet.epsilon;
  rep.samples = n;
  for (std::size_t i = 0; i < n; ++i) {
    const double k2 = frenet.kappa[i] * frenet.kappa[i];
    const double r = darboux.k_g[i] * darboux.k_g[i] - darboux.k_n[i] * darboux.k_n[i] -
                     static_cast<double>(frenet.epsilon) * k2;
    rep.curvature_residual = std::max(rep.curvature_residual, std::abs(r));
  }
  if (frenet.epsilon != -1 || frenet.n.size() != n || n < 5) return rep;

  rep.angle_relations_applicable = true;
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) phi[i] = std::asinh(inner(frenet.n[i], darboux.B[i]));
  const auto dphi = fd::derivative<double>(phi, darboux.spacing, darboux.closed);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = frenet.kappa[i];
    rep.k_n_residual = std::max(rep.k_n_residual, std::abs(darboux.k_n[i] - k * std::cosh(phi[i])));
    rep.k_g_residual = std::max(rep.k_g_residual, std::abs(darboux.k_g[i] - k * std::sinh(phi[i])));
    rep.tau_g_residual = std::max(rep.tau_g_residual, std::abs(darboux.tau_g[i] - (frenet.tau[i] - dphi[i])));
    rep.tau_g_residual_literal =
        std::max(rep.tau_g_residual_literal, std::abs(darboux.tau_g[i] - (frenet.tau[i] + dphi[i])));
  }
  return rep;
}

AsymptoticReport no_asymptotic_check(const DarbouxData& darboux, const FrenetData& frenet, double tol) {
  AsymptoticReport rep;
  if (frenet.epsilon != -1) {
    rep.applicable = false;
    rep.note = "not applicable: principal normal is spacelike (eps = +1)";
    return rep;
  }
  rep.applicable = true;
  rep.samples = darboux.size();
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < darboux.size() && i < frenet.kappa.size(); ++i) {
    rep.worst_margin = std::min(rep.worst_margin, std::abs(darboux.k_n[i]) - frenet.kappa[i]);
  }
  rep.pass = rep.worst_margin >= -tol;
  rep.note = rep.pass ? "|k_n| >= kappa at every sample" : "|k_n| < kappa somewhere";
  return rep;
}

}  // namespace minkiso
