#include "minkiso/isophote.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "minkiso/error.hpp"
#include "minkiso/parallel.hpp"

namespace minkiso {

std::string_view to_string(AxisKind kind) noexcept {
  return kind == AxisKind::Timelike ? "timelike" : "spacelike";
}

GuardResult silhouette_guard(AxisKind kind, double theta) {
  if (theta == 0.0) {
    throw Error(ErrorKind::SilhouetteUndefined,
                kind == AxisKind::Timelike
                    ? "theta = 0 would force N = d; silhouettes do not exist on spacelike surfaces"
                    : "theta = 0 asks for <N,d> = 0, a silhouette, which is not an isophote on a spacelike surface");
  }
  GuardResult r;
  r.accepted = true;
  if (kind == AxisKind::Timelike) {
    r.note = "level -cosh(theta) <= -1; <N,d> = 0 is unreachable for two timelike vectors";
  } else {
    r.note = "level sinh(theta) != 0";
  }
  return r;
}

AxisSpec AxisSpec::make(const Vec3M& d, AxisKind kind, double theta) {
  if (!std::isfinite(theta)) throw Error(ErrorKind::InvalidArgument, "theta must be finite");
  silhouette_guard(kind, theta);
  if (theta < 0.0) throw Error(ErrorKind::InvalidArgument, "theta must be positive");

  const CausalCharacter c = causal_character(d);
  AxisSpec a;
  a.kind = kind;
  a.theta = theta;
  if (kind == AxisKind::Timelike) {
    if (c != CausalCharacter::Timelike) {
      throw Error(ErrorKind::InvalidArgument, "timelike axis requested but d is not timelike");
    }
    a.d = d / std::sqrt(-inner(d, d));
    if (a.d.x1() < 0.0) {
      a.d = -a.d;
      a.flipped = true;
    }
  } else {
    if (c != CausalCharacter::Spacelike || euclid_norm(d) == 0.0) {
      throw Error(ErrorKind::InvalidArgument, "spacelike axis requested but d is not spacelike");
    }
    a.d = d / std::sqrt(inner(d, d));
  }
  return a;
}

double AxisSpec::level() const { return kind == AxisKind::Timelike ? -std::cosh(theta) : std::sinh(theta); }

// ---------------------------------------------------------------------------

double ScalarGrid::u(std::size_t i) const { return grid_coordinate(domain.u0, domain.u1, nu, periodic_u, i); }
double ScalarGrid::v(std::size_t j) const { return grid_coordinate(domain.v0, domain.v1, nv, periodic_v, j); }
double ScalarGrid::min() const { return *std::min_element(values.begin(), values.end()); }
double ScalarGrid::max() const { return *std::max_element(values.begin(), values.end()); }

namespace {

constexpr std::size_t kMaxSamples = 4096;
constexpr double kMaxTurn = 0.01;

// Largest Euclidean angle between consecutive chords of the trace.
double max_turn(const SampledCurve& c) {
  const std::size_t n = c.size();
  double worst = 0.0;
  const std::size_t first = c.closed ? 0 : 1, last = c.closed ? n : n - 1;
  for (std::size_t i = first; i < last; ++i) {
    const Vec3M& prev = c.p[(i + n - 1) % n];
    const Vec3M& next = c.p[(i + 1) % n];
    const Vec3M a = c.p[i] - prev, b = next - c.p[i];
    const double na = std::sqrt(euclid_dot(a, a)), nb = std::sqrt(euclid_dot(b, b));
    if (na == 0.0 || nb == 0.0) continue;
    worst = std::max(worst, std::acos(std::clamp(euclid_dot(a, b) / (na * nb), -1.0, 1.0)));
  }
  return worst;
}


ScalarGrid empty_grid(const ParamSurface& surface, std::size_t grid_n) {
  if (grid_n < 2) throw Error(ErrorKind::InvalidArgument, "illumination_field needs grid_n >= 2");
  ScalarGrid g;
  g.nu = g.nv = grid_n;
  g.domain = surface.domain();
  g.periodic_u = surface.periodic_u();
  g.periodic_v = surface.periodic_v();
  g.values.resize(grid_n * grid_n);
  return g;
}

}  // namespace

ScalarGrid illumination_field(const ParamSurface& surface, const Vec3M& d, std::size_t grid_n) {
  ScalarGrid g = empty_grid(surface, grid_n);
  parallel_for(g.values.size(), [&](std::size_t k) {
    const std::size_t i = k / g.nv, j = k % g.nv;
    g.values[k] = inner(surface_normal(surface, g.u(i), g.v(j)), d);
  });
  return g;
}

ScalarGrid illumination_field_serial(const ParamSurface& surface, const Vec3M& d, std::size_t grid_n) {
  ScalarGrid g = empty_grid(surface, grid_n);
  for (std::size_t i = 0; i < g.nu; ++i) {
    for (std::size_t j = 0; j < g.nv; ++j) {
      g.values[i * g.nv + j] = inner(surface_normal(surface, g.u(i), g.v(j)), d);
    }
  }
  return g;
}

UV project_to_level(const ParamSurface& surface, const Vec3M& d, double level, UV q, double tol) {
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 12; ++it) {
    const NormalJet nj = normal_jet(surface, q.u, q.v);
    const double g = inner(nj.N, d) - level;
    // stop once converged or when roundoff stalls the iteration
    if (std::abs(g) <= tol || std::abs(g) >= prev) break;
    prev = std::abs(g);
    const double fu = inner(nj.Nu, d), fv = inner(nj.Nv, d);
    const double grad2 = fu * fu + fv * fv;
    if (!(grad2 > 0.0)) break;
    q.u -= g * fu / grad2;
    q.v -= g * fv / grad2;
  }
  return q;
}

// ---------------------------------------------------------------------------
// Marching squares

namespace {

using EdgeId = std::int64_t;

struct Crossing {
  EdgeId id;
  std::size_t i, j;  // start node (canonical)
  int dir;           // 0: along u, 1: along v
};

class Contour {
 public:
  Contour(const ParamSurface& surface, const ScalarGrid& grid, const Vec3M& d, double level, double tol)
      : surface_(surface), grid_(grid), d_(d), level_(level), tol_(tol) {
    cells_u_ = grid.periodic_u ? grid.nu : grid.nu - 1;
    cells_v_ = grid.periodic_v ? grid.nv : grid.nv - 1;
  }

  bool above(std::size_t i, std::size_t j) const { return grid_.at(i % grid_.nu, j % grid_.nv) >= level_; }

  EdgeId edge_id(std::size_t i, std::size_t j, int dir) const {
    return static_cast<EdgeId>(((i % grid_.nu) * grid_.nv + (j % grid_.nv)) * 2 + static_cast<std::size_t>(dir));
  }

  // Node coordinates; i may equal nu on a periodic axis (the far end of the domain).
  double node_u(std::size_t i) const { return i == grid_.nu ? grid_.domain.u1 : grid_.u(i); }
  double node_v(std::size_t j) const { return j == grid_.nv ? grid_.domain.v1 : grid_.v(j); }

  std::vector<Crossing> crossings() const {
    std::vector<Crossing> out;
    for (std::size_t i = 0; i < grid_.nu; ++i) {
      for (std::size_t j = 0; j < grid_.nv; ++j) {
        const bool a = above(i, j);
        if ((i + 1 < grid_.nu || grid_.periodic_u) && above(i + 1, j) != a) {
          out.push_back({edge_id(i, j, 0), i, j, 0});
        }
        if ((j + 1 < grid_.nv || grid_.periodic_v) && above(i, j + 1) != a) {
          out.push_back({edge_id(i, j, 1), i, j, 1});
        }
      }
    }
    return out;
  }

  double field(double u, double v) const { return inner(surface_normal(surface_, u, v), d_) - level_; }

  // Bisection alternating with regula falsi, capped at 60 iterations.
  UV refine(const Crossing& c) const {
    const double u0 = node_u(c.i), v0 = node_v(c.j);
    const double u1 = c.dir == 0 ? node_u(c.i + 1) : u0;
    const double v1 = c.dir == 1 ? node_v(c.j + 1) : v0;
    auto point = [&](double t) { return UV{u0 + t * (u1 - u0), v0 + t * (v1 - v0)}; };
    auto g = [&](double t) {
      const UV p = point(t);
      return field(p.u, p.v);
    };
    double a = 0.0, b = 1.0;
    double ga = grid_.at(c.i, c.j) - level_;
    double gb = (c.dir == 0 ? grid_.at((c.i + 1) % grid_.nu, c.j) : grid_.at(c.i, (c.j + 1) % grid_.nv)) - level_;
    // half the tolerance leaves room for roundoff when callers re-evaluate f
    const double tol = 0.5 * tol_;
    if (std::abs(ga) <= tol) return point(a);
    if (std::abs(gb) <= tol) return point(b);
    double best_t = std::abs(ga) < std::abs(gb) ? a : b;
    double best_g = std::min(std::abs(ga), std::abs(gb));
    for (int it = 0; it < 60; ++it) {
      double t = (it % 2 == 0) ? a - ga * (b - a) / (gb - ga) : 0.5 * (a + b);
      if (!(t > a && t < b)) t = 0.5 * (a + b);
      const double gt = g(t);
      if (std::abs(gt) < best_g) {
        best_g = std::abs(gt);
        best_t = t;
      }
      if (best_g <= tol) break;
      if ((gt >= 0.0) == (ga >= 0.0)) {
        a = t;
        ga = gt;
      } else {
        b = t;
        gb = gt;
      }
      if (b - a <= 1e-16) break;
    }
    return point(best_t);
  }

  // Segments as pairs of edge ids.
  std::vector<std::array<EdgeId, 2>> segments(std::size_t& saddles) const {
    std::vector<std::array<EdgeId, 2>> out;
    saddles = 0;
    for (std::size_t i = 0; i < cells_u_; ++i) {
      for (std::size_t j = 0; j < cells_v_; ++j) {
        const bool b0 = above(i, j), b1 = above(i + 1, j), b2 = above(i + 1, j + 1), b3 = above(i, j + 1);
        const EdgeId e0 = edge_id(i, j, 0), e1 = edge_id(i + 1, j, 1), e2 = edge_id(i, j + 1, 0),
                     e3 = edge_id(i, j, 1);
        const bool x0 = b0 != b1, x1 = b1 != b2, x2 = b3 != b2, x3 = b0 != b3;
        const int count = x0 + x1 + x2 + x3;
        if (count == 0) continue;
        if (count == 4) {
          ++saddles;
          const double uc = 0.5 * (node_u(i) + node_u(i + 1));
          const double vc = 0.5 * (node_v(j) + node_v(j + 1));
          const bool center = field(uc, vc) >= 0.0;
          if (center == b0) {
            out.push_back({e0, e1});
            out.push_back({e2, e3});
          } else {
            out.push_back({e0, e3});
            out.push_back({e1, e2});
          }
          continue;
        }
        std::array<EdgeId, 2> seg{};
        int k = 0;
        if (x0) seg[k++] = e0;
        if (x1) seg[k++] = e1;
        if (x2) seg[k++] = e2;
        if (x3) seg[k++] = e3;
        out.push_back(seg);
      }
    }
    return out;
  }

 private:
  const ParamSurface& surface_;
  const ScalarGrid& grid_;
  Vec3M d_;
  double level_;
  double tol_;
  std::size_t cells_u_ = 0, cells_v_ = 0;
};

struct Chain {
  std::vector<EdgeId> edges;
  bool closed = false;
};

std::vector<Chain> chain_segments(const std::vector<std::array<EdgeId, 2>>& segs) {
  std::unordered_map<EdgeId, std::array<EdgeId, 2>> adj;
  std::unordered_map<EdgeId, int> degree;
  for (const auto& s : segs) {
    for (int k = 0; k < 2; ++k) {
      const EdgeId a = s[static_cast<std::size_t>(k)], b = s[static_cast<std::size_t>(1 - k)];
      int& deg = degree[a];
      if (deg < 2) adj[a][static_cast<std::size_t>(deg)] = b;
      ++deg;
    }
  }
  std::vector<EdgeId> ids;
  ids.reserve(degree.size());
  for (const auto& [id, deg] : degree) ids.push_back(id);
  std::sort(ids.begin(), ids.end());

  std::unordered_map<EdgeId, bool> visited;
  auto walk = [&](EdgeId start) {
    Chain c;
    EdgeId prev = -1, cur = start;
    for (;;) {
      c.edges.push_back(cur);
      visited[cur] = true;
      const int deg = std::min(degree[cur], 2);
      EdgeId next = -1;
      for (int k = 0; k < deg; ++k) {
        const EdgeId cand = adj[cur][static_cast<std::size_t>(k)];
        if (cand != prev && !(visited[cand] && cand != start)) {
          next = cand;
          break;
        }
      }
      if (next < 0) break;
      if (next == start) {
        c.closed = true;
        break;
      }
      prev = cur;
      cur = next;
    }
    return c;
  };

  std::vector<Chain> chains;
  for (EdgeId id : ids) {
    if (degree[id] == 1 && !visited[id]) chains.push_back(walk(id));
  }
  for (EdgeId id : ids) {
    if (!visited[id]) chains.push_back(walk(id));
  }
  return chains;
}

double wrapped_gap(double a, double b, double period, bool periodic) {
  double d = std::abs(a - b);
  if (periodic) d = std::min(d, std::abs(period - d));
  return d;
}

}  // namespace

std::vector<IsophotePolyline> extract_isophotes(const ParamSurface& surface, const AxisSpec& axis,
                                                std::size_t grid_n, double refine_tol, const ExtractOptions& opts,
                                                ExtractStats* stats) {
  silhouette_guard(axis);
  if (!(refine_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "refine_tol must be positive");
  if (grid_n < 2) throw Error(ErrorKind::InvalidArgument, "extract_isophotes needs grid_n >= 2");

  const double level = axis.level();
  const ScalarGrid grid = illumination_field(surface, axis.d, grid_n);
  ExtractStats local;
  local.field_min = grid.min();
  local.field_max = grid.max();

  std::vector<IsophotePolyline> out;
  if (level < local.field_min || level > local.field_max) {
    if (stats) *stats = local;
    return out;
  }

  const Contour contour(surface, grid, axis.d, level, refine_tol);
  const std::vector<Crossing> crossings = contour.crossings();
  local.crossing_edges = crossings.size();
  std::vector<UV> roots(crossings.size());
  parallel_for(crossings.size(), [&](std::size_t k) { roots[k] = contour.refine(crossings[k]); });
  std::unordered_map<EdgeId, std::size_t> root_of;
  for (std::size_t k = 0; k < crossings.size(); ++k) root_of.emplace(crossings[k].id, k);

  const auto segs = contour.segments(local.saddle_cells);
  const std::vector<Chain> chains = chain_segments(segs);

  const Domain& dom = surface.domain();
  const double merge_u = 1e-9 * dom.u_span(), merge_v = 1e-9 * dom.v_span();
  auto same = [&](const UV& a, const UV& b) {
    return wrapped_gap(a.u, b.u, dom.u_span(), surface.periodic_u()) <= merge_u &&
           wrapped_gap(a.v, b.v, dom.v_span(), surface.periodic_v()) <= merge_v;
  };

  // Projection runs to roundoff: residual noise in the trace is amplified by
  // the third derivatives behind the Frenet torsion.
  const UVProjector project = [&surface, &axis, level](UV q) {
    return project_to_level(surface, axis.d, level, q, 0.0);
  };

  for (const Chain& chain : chains) {
    std::vector<UV> path;
    path.reserve(chain.edges.size() + 1);
    for (EdgeId id : chain.edges) {
      const UV& p = roots[root_of.at(id)];
      if (path.empty() || !same(path.back(), p)) path.push_back(p);
    }
    if (chain.closed) {
      while (path.size() > 1 && same(path.back(), path.front())) path.pop_back();
    }
    if (path.size() < 4) {
      ++local.dropped_chains;
      continue;
    }
    if (chain.closed) path.push_back(path.front());

    std::size_t n_out = opts.samples > 0 ? opts.samples : std::clamp<std::size_t>(2 * path.size(), 64, kMaxSamples);
    SurfaceCurve curve = make_surface_curve(surface, path, chain.closed, n_out, project);
    if (opts.samples == 0) {
      // sharp bends: refine until no chord turns more than kMaxTurn
      const double turn = max_turn(curve.trace);
      if (turn > kMaxTurn && n_out < kMaxSamples) {
        n_out = std::min<std::size_t>(
            kMaxSamples, static_cast<std::size_t>(std::ceil(static_cast<double>(n_out) * turn / kMaxTurn)));
        curve = make_surface_curve(surface, path, chain.closed, n_out, project);
      }
    }
    IsophotePolyline poly{axis, level, path, chain.closed, std::move(curve)};
    out.push_back(std::move(poly));
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace minkiso
