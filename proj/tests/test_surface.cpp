#include <doctest.h>

#include <cmath>

#include "minkiso/error.hpp"
#include "minkiso/expr.hpp"
#include "minkiso/surface.hpp"
#include "support.hpp"

using namespace minkiso;
using testsupport::coth;
using testsupport::kTwoPi;
using testsupport::thrown_kind;

namespace {

double frame_defect(const DarbouxData& dd) {
  double m = 0.0;
  for (std::size_t i = 0; i < dd.size(); ++i) {
    const Vec3M &T = dd.T[i], &B = dd.B[i], &N = dd.N[i];
    m = std::max({m, std::abs(inner(T, T) - 1.0), std::abs(inner(B, B) - 1.0), std::abs(inner(N, N) + 1.0),
                  std::abs(inner(T, B)), std::abs(inner(T, N)), std::abs(inner(B, N))});
  }
  return m;
}

// With e1 x e2 = -e3 the Darboux frame satisfies B = N x T, B x N = T and T x B = -N.
double cross_identity_defect(const DarbouxData& dd) {
  double m = 0.0;
  for (std::size_t i = 0; i < dd.size(); ++i) {
    const Vec3M &T = dd.T[i], &B = dd.B[i], &N = dd.N[i];
    m = std::max({m, euclid_norm(cross(N, T) - B), euclid_norm(cross(B, N) - T), euclid_norm(cross(T, B) + N)});
  }
  return m;
}

double dual_route_defect(const DarbouxData& dd, std::size_t margin) {
  return std::max(testsupport::interior_max(dd.size(), margin, [&](std::size_t i) { return dd.k_n[i] - dd.k_n_alt[i]; }),
                  testsupport::interior_max(dd.size(), margin,
                                            [&](std::size_t i) { return dd.tau_g[i] - dd.tau_g_alt[i]; }));
}

// Graph x1 = f(x2, x3): N = (1, f_2, f_3) / sqrt(1 - f_2^2 - f_3^2).
Vec3M graph_normal(double f2, double f3) {
  const double w = std::sqrt(1.0 - f2 * f2 - f3 * f3);
  return Vec3M(1.0, f2, f3) / w;
}

}  // namespace

TEST_CASE("expression parser") {
  const auto e = Expression::parse("2*sinh(u)^2 - -v/4 + e^0 + pi*0");
  CHECK(e.eval(0.5, 2.0) == doctest::Approx(2 * std::sinh(0.5) * std::sinh(0.5) + 0.5 + 1.0));
  CHECK(Expression::parse("-2^2").eval(0, 0) == doctest::Approx(-4.0));
  CHECK(Expression::parse("2^3^2").eval(0, 0) == doctest::Approx(512.0));
  CHECK(Expression::parse("sqrt(exp(log(4)))").eval(0, 0) == doctest::Approx(2.0));
  CHECK(Expression::parse("tanh(u)+cos(v)*sin(v)").eval(0.3, 0.2) ==
        doctest::Approx(std::tanh(0.3) + std::cos(0.2) * std::sin(0.2)));
  CHECK(Expression::parse("1.5e-1*u").eval(2.0, 0.0) == doctest::Approx(0.3));

  try {
    (void)parse_component_list("u+, v, 0");
    FAIL("expected SyntaxError");
  } catch (const ParseError& pe) {
    CHECK(pe.kind() == ErrorKind::SyntaxError);
    CHECK(pe.offset() == 2);
    CHECK_FALSE(pe.expected().empty());
  }
  try {
    (void)parse_component_list("u, w, 0");
    FAIL("expected UnknownIdentifier");
  } catch (const ParseError& pe) {
    CHECK(pe.kind() == ErrorKind::UnknownIdentifier);
    CHECK(pe.offset() == 3);
  }
  CHECK(thrown_kind([] { (void)parse_component_list("u, v"); }) == ErrorKind::SyntaxError);
  CHECK(thrown_kind([] { (void)Expression::parse("(u"); }) == ErrorKind::SyntaxError);
  CHECK(thrown_kind([] { (void)Expression::parse("log(u)").eval(-1.0, 0.0); }) == ErrorKind::DomainError);
  CHECK(thrown_kind([] { (void)Expression::parse("sqrt(u)").eval(-1.0, 0.0); }) == ErrorKind::DomainError);
}

TEST_CASE("parsed surfaces evaluate their components") {
  const auto hyp = testsupport::hyperboloid_expr();
  const Vec3M p = hyp.eval(1.0, 0.0);
  CHECK(p.x1() == doctest::Approx(std::cosh(1.0)));
  CHECK(p.x2() == doctest::Approx(std::sinh(1.0)));
  CHECK(p.x3() == doctest::Approx(0.0));
  CHECK(hyp.jet_source() == JetSource::FiniteDifference);

  const auto graph = parse_surface_expr("sqrt(1+u^2+v^2), u, v", {-1, 1, -1, 1});
  CHECK(graph.eval(0.0, 0.0) == Vec3M(1, 0, 0));
}

TEST_CASE("finite-difference jets match analytic jets") {
  const auto a = testsupport::hyperboloid();
  const auto f = testsupport::hyperboloid_expr();
  for (auto [u, v] : {std::pair{0.4, 1.0}, std::pair{1.3, 5.0}, std::pair{1.9, 0.1}}) {
    const SurfaceJet ja = a.jet(u, v), jf = f.jet(u, v);
    CHECK(euclid_norm(ja.Su - jf.Su) <= 1e-9 * euclid_norm(ja.Su));
    CHECK(euclid_norm(ja.Sv - jf.Sv) <= 1e-9 * euclid_norm(ja.Sv));
    CHECK(euclid_norm(ja.Suu - jf.Suu) <= 1e-6 * euclid_norm(ja.Suu));
    CHECK(euclid_norm(ja.Suv - jf.Suv) <= 1e-6 * (1.0 + euclid_norm(ja.Suv)));
    CHECK(euclid_norm(ja.Svv - jf.Svv) <= 1e-6 * euclid_norm(ja.Svv));
  }
}

TEST_CASE("builtin catalog") {
  const auto hyp = testsupport::hyperboloid();
  CHECK(hyp.periodic_v());
  CHECK_FALSE(hyp.periodic_u());
  CHECK(hyp.jet_source() == JetSource::Analytic);
  for (int i = 0; i <= 10; ++i) {
    for (int j = 0; j < 12; ++j) {
      const double u = 0.1 + 0.19 * i, v = kTwoPi * j / 12.0;
      const Vec3M S = hyp.eval(u, v);
      CHECK(inner(S, S) == doctest::Approx(-1.0).epsilon(1e-13));
      const Vec3M N = surface_normal(hyp, u, v);
      CHECK(euclid_norm(N - testsupport::hyperboloid_point(u, v)) <= 1e-13 * std::cosh(u));
      CHECK(std::abs(inner(N, N) + 1.0) <= 1e-12);
    }
  }
  CHECK(thrown_kind([] { (void)builtin_surface("torus"); }) == ErrorKind::UnknownSurface);
  CHECK(thrown_kind([] { (void)builtin_surface("hyperboloid", {{"bogus", 1.0}}); }) == ErrorKind::BadParams);
  CHECK(thrown_kind([] { (void)builtin_surface("hyperboloid", {{"radius", -1.0}}); }) == ErrorKind::BadParams);
}

TEST_CASE("surface normal: graphs and degenerate points") {
  const auto plane = builtin_surface("spacelike_graph");
  const Vec3M n0 = surface_normal(plane, 0.2, -0.7);
  CHECK(n0 == Vec3M(1, 0, 0));

  const auto graph = builtin_surface("spacelike_graph", {{"gu", 0.3}, {"huv", 0.2}, {"amp", 0.1}, {"ku", 2.0}});
  for (auto [u, v] : {std::pair{0.1, 0.2}, std::pair{-0.8, 0.9}}) {
    const double fu = 0.3 + 0.2 * v + 0.2 * std::cos(2.0 * u), fv = 0.2 * u;
    CHECK(euclid_norm(surface_normal(graph, u, v) - graph_normal(fu, fv)) <= 1e-13);
  }

  // polar parameterization of x1 = 0 collapses at u = 0
  const auto polar = parse_surface_expr("0, u*cos(v), u*sin(v)", {0, 1, 0, kTwoPi}, false, true);
  try {
    (void)surface_normal(polar, 0.0, 0.3);
    FAIL("expected DegenerateJacobian");
  } catch (const CellError& e) {
    CHECK(e.kind() == ErrorKind::DegenerateJacobian);
    CHECK(e.u() == 0.0);
    CHECK(e.v() == 0.3);
  }
  const auto sheet = builtin_surface("spacelike_graph", {{"gu", 2.0}});
  CHECK(thrown_kind([&] { (void)surface_normal(sheet, 0.0, 0.0); }) == ErrorKind::NotTimelikeNormal);
}

TEST_CASE("normal jet matches differences of the normal") {
  const auto s = builtin_surface("spacelike_graph", {{"gu", 0.2}, {"huu", 0.4}, {"amp", 0.1}, {"kv", 3.0}});
  const double u = 0.3, v = -0.2, h = 1e-5;
  const NormalJet nj = normal_jet(s, u, v);
  const Vec3M Nu = (surface_normal(s, u + h, v) - surface_normal(s, u - h, v)) / (2 * h);
  const Vec3M Nv = (surface_normal(s, u, v + h) - surface_normal(s, u, v - h)) / (2 * h);
  CHECK(euclid_norm(nj.Nu - Nu) <= 1e-8);
  CHECK(euclid_norm(nj.Nv - Nv) <= 1e-8);
}

TEST_CASE("verify_spacelike") {
  const auto hyp = testsupport::hyperboloid();
  const SpacelikeReport ok = verify_spacelike(hyp, 64);
  CHECK(ok.pass);
  CHECK(ok.failing_nodes == 0);
  CHECK_FALSE(ok.failure.has_value());
  // E = 1 and G = sinh^2 u: min EG - F^2 = sinh^2 0.1
  CHECK(ok.min_E == doctest::Approx(1.0));
  CHECK(ok.min_det == doctest::Approx(std::sinh(0.1) * std::sinh(0.1)).epsilon(1e-10));

  const auto sheet = builtin_surface("spacelike_graph", {{"gu", 2.0}});
  const SpacelikeReport bad = verify_spacelike(sheet, 16);
  CHECK_FALSE(bad.pass);
  REQUIRE(bad.failure.has_value());
  CHECK(bad.failure->i == 0);
  CHECK(bad.failure->j == 0);
  CHECK(bad.failure->u == -1.0);
  CHECK(bad.failure->v == -1.0);
  // E = 1 - 4 = -3 everywhere
  CHECK(bad.min_E == doctest::Approx(-3.0));

  CHECK(thrown_kind([&] { (void)verify_spacelike(hyp, 1); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("verify_spacelike: OpenMP result equals the serial reference") {
  // spacelike only for |u| < 0.5 (f_u = 2u), so failures are spread over the grid
  const auto s = builtin_surface("spacelike_graph", {{"huu", 2.0}, {"amp", 0.05}, {"kv", 4.0}});
  for (std::size_t n : {2u, 17u, 100u}) {
    const SpacelikeReport a = verify_spacelike(s, n), b = verify_spacelike_serial(s, n);
    CHECK(a.pass == b.pass);
    CHECK(a.failing_nodes == b.failing_nodes);
    CHECK(a.min_E == b.min_E);
    CHECK(a.min_det == b.min_det);
    CHECK(a.min_normal_margin == b.min_normal_margin);
    REQUIRE(a.failure.has_value() == b.failure.has_value());
    if (a.failure) {
      CHECK(a.failure->i == b.failure->i);
      CHECK(a.failure->j == b.failure->j);
    }
  }
}

TEST_CASE("surface curves: trace lies on the surface") {
  const auto hyp = testsupport::hyperboloid();
  const SurfaceCurve c = testsupport::latitude(hyp, 1.0, 48, 300);
  REQUIRE(c.path.size() == c.trace.size());
  double off = 0.0, du = 0.0;
  for (std::size_t i = 0; i < c.path.size(); ++i) {
    off = std::max(off, euclid_norm(c.trace.p[i] - hyp.eval(c.path[i].u, c.path[i].v)));
    du = std::max(du, std::abs(c.path[i].u - 1.0));
  }
  CHECK(off <= 1e-12);
  CHECK(du <= 1e-12);
  CHECK(c.trace.closed);
  CHECK(std::abs(c.trace.length / (kTwoPi * std::sinh(1.0)) - 1.0) <= 1e-6);

  std::vector<UV> three{{0.5, 0.0}, {0.6, 0.0}, {0.7, 0.0}};
  CHECK(thrown_kind([&] { (void)make_surface_curve(hyp, three, false, 20); }) == ErrorKind::TooFewPoints);
}

TEST_CASE("surface_curve_from_points locates points and rejects off-surface input") {
  const auto hyp = testsupport::hyperboloid();
  std::vector<Vec3M> pts;
  for (int k = 0; k < 40; ++k) pts.push_back(testsupport::hyperboloid_point(0.8, kTwoPi * k / 40.0));
  const SurfaceCurve c = surface_curve_from_points(hyp, pts, true, 200);
  for (const UV& q : c.path) CHECK(std::abs(q.u - 0.8) <= 1e-10);

  pts[7] = pts[7] * 1.001;
  CHECK(thrown_kind([&] { (void)surface_curve_from_points(hyp, pts, true, 200); }) == ErrorKind::OffSurface);
}

TEST_CASE("Darboux oracle: hyperboloid latitude u = 1") {
  const auto hyp = testsupport::hyperboloid();
  const DarbouxData dd = darboux_apparatus(testsupport::latitude(hyp, 1.0, 64, 512));
  // increasing v: T = (0, -sin v, cos v), k_g = <T', B> = -coth 1
  CHECK(testsupport::max_abs_diff(dd.k_n, 1.0) <= 1e-6);
  CHECK(testsupport::max_abs_diff(dd.k_g, -coth(1.0)) <= 1e-5);
  CHECK(testsupport::max_abs_diff(dd.tau_g, 0.0) <= 1e-6);
  CHECK(frame_defect(dd) <= 1e-6);
  CHECK(cross_identity_defect(dd) <= 1e-6);
  CHECK(dual_route_defect(dd, 0) <= 1e-6);
  for (const Vec3M& N : dd.N) CHECK(std::abs(inner(N, N) + 1.0) <= 1e-12);
  REQUIRE(dd.frenet.has_value());
  CHECK(dd.frenet->epsilon == 1);
  for (const auto& p : dd.phi) CHECK_FALSE(p.has_value());

  const RelationReport rel = relation_check(dd, *dd.frenet);
  CHECK(rel.epsilon == 1);
  CHECK(rel.curvature_residual <= 1e-6);
  CHECK_FALSE(rel.angle_relations_applicable);
  const AsymptoticReport asym = no_asymptotic_check(dd, *dd.frenet);
  CHECK_FALSE(asym.applicable);
  CHECK(asym.pass);
  CHECK(asym.note.find("not applicable") != std::string::npos);
}

TEST_CASE("Darboux oracle: hyperboloid meridian is a geodesic with eps -1") {
  const auto hyp = testsupport::hyperboloid();
  const DarbouxData dd = darboux_apparatus(testsupport::meridian(hyp, 0.7, 0.2, 1.8, 80, 600));
  const std::size_t n = dd.size();
  CHECK(testsupport::interior_max(n, 4, [&](std::size_t i) { return dd.k_n[i] - 1.0; }) <= 1e-6);
  CHECK(testsupport::interior_max(n, 4, [&](std::size_t i) { return dd.k_g[i]; }) <= 1e-6);
  CHECK(testsupport::interior_max(n, 4, [&](std::size_t i) { return dd.tau_g[i]; }) <= 1e-6);
  CHECK(dual_route_defect(dd, 4) <= 1e-6);
  CHECK(cross_identity_defect(dd) <= 1e-6);
  REQUIRE(dd.frenet.has_value());
  CHECK(dd.frenet->epsilon == -1);
  // n = N along a geodesic: phi = 0
  for (std::size_t i = 4; i + 4 < n; ++i) {
    REQUIRE(dd.phi[i].has_value());
    CHECK(std::abs(*dd.phi[i]) <= 1e-6);
  }
  const RelationReport rel = relation_check(dd, *dd.frenet);
  CHECK(rel.epsilon == -1);
  CHECK(rel.angle_relations_applicable);
  CHECK(rel.curvature_residual <= 1e-5);
  CHECK(rel.k_n_residual <= 1e-5);
  CHECK(rel.k_g_residual <= 1e-5);
  CHECK(rel.tau_g_residual <= 1e-4);
  const AsymptoticReport asym = no_asymptotic_check(dd, *dd.frenet, 1e-5);
  CHECK(asym.applicable);
  CHECK(asym.pass);
  // |k_n| = kappa = 1: margin 0
  CHECK(std::abs(asym.worst_margin) <= 1e-5);
}

TEST_CASE("Darboux oracle: circle on the paraboloid of revolution") {
  // x1 = a r^2 / 2; on r = u0 with p = a u0, w = sqrt(1 - p^2):
  // k_n = a / w, k_g = -1 / (u0 w), tau_g = 0
  const double a = 0.5, u0 = 1.0, p = a * u0, w = std::sqrt(1 - p * p);
  const auto s = builtin_surface("spacelike_revolution", {{"a", a}});
  const DarbouxData dd = darboux_apparatus(testsupport::latitude(s, u0, 64, 400));
  CHECK(testsupport::max_abs_diff(dd.k_n, a / w) <= 1e-6);
  CHECK(testsupport::max_abs_diff(dd.k_g, -1.0 / (u0 * w)) <= 1e-6);
  CHECK(testsupport::max_abs_diff(dd.tau_g, 0.0) <= 1e-6);
  CHECK(frame_defect(dd) <= 1e-6);
  CHECK(cross_identity_defect(dd) <= 1e-6);
}

TEST_CASE("Darboux data of a straight line in the plane x1 = 0") {
  const auto plane = builtin_surface("spacelike_graph");
  std::vector<UV> path;
  for (int k = 0; k < 10; ++k) path.push_back({-0.9 + 0.2 * k, -0.5 + 0.1 * k});
  const DarbouxData dd = darboux_apparatus(make_surface_curve(plane, path, false, 100));
  CHECK(testsupport::max_abs_diff(dd.k_n, 0.0) <= 1e-10);
  CHECK(testsupport::max_abs_diff(dd.k_g, 0.0) <= 1e-10);
  CHECK(testsupport::max_abs_diff(dd.tau_g, 0.0) <= 1e-10);
  CHECK_FALSE(dd.frenet.has_value());
}

TEST_CASE("Darboux data with geodesic torsion on a graph") {
  // the curve v = 0.3 sin(3(u + 0.6)) across a saddle: tau_g != 0. Resampled points are
  // projected back onto the analytic curve, so the trace is smooth (no spline knots).
  const auto s = builtin_surface("spacelike_graph", {{"huv", 0.6}, {"huu", 0.1}});
  auto g = [](double u) { return 0.3 * std::sin(3.0 * (u + 0.6)); };
  std::vector<UV> path;
  for (int k = 0; k <= 20; ++k) path.push_back({-0.6 + 0.06 * k, g(-0.6 + 0.06 * k)});
  const UVProjector onto = [&](UV q) { return UV{q.u, g(q.u)}; };
  const DarbouxData dd = darboux_apparatus(make_surface_curve(s, path, false, 400, onto));
  CHECK(testsupport::interior_max(dd.size(), 0, [&](std::size_t i) { return dd.tau_g[i]; }) >= 1e-2);
  CHECK(dual_route_defect(dd, 6) <= 1e-6);
  CHECK(frame_defect(dd) <= 1e-6);
  CHECK(cross_identity_defect(dd) <= 1e-6);
  if (dd.frenet) {
    const RelationReport rel = relation_check(dd, *dd.frenet);
    CHECK(rel.curvature_residual <= 1e-4);
  }
}

TEST_CASE("parsed and builtin hyperboloids give the same Darboux data") {
  const auto a = testsupport::hyperboloid();
  const auto f = testsupport::hyperboloid_expr();
  std::vector<UV> path;
  for (int k = 0; k < 30; ++k) path.push_back({0.6 + 0.5 * std::sin(0.2 * k), 0.3 + 0.15 * k});
  const DarbouxData da = darboux_apparatus(make_surface_curve(a, path, false, 300));
  const DarbouxData df = darboux_apparatus(make_surface_curve(f, path, false, 300));
  REQUIRE(da.size() == df.size());
  double m = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    m = std::max({m, std::abs(da.k_n[i] - df.k_n[i]), std::abs(da.k_g[i] - df.k_g[i]),
                  std::abs(da.tau_g[i] - df.tau_g[i]), euclid_norm(da.N[i] - df.N[i]),
                  euclid_norm(da.T[i] - df.T[i])});
  }
  CHECK(m <= 1e-4);
}

TEST_CASE("spacelike verification implies Darboux data exists inside the grid hull") {
  const auto s = builtin_surface("spacelike_graph", {{"gu", 0.3}, {"hvv", 0.5}, {"amp", 0.05}, {"ku", 3.0}});
  REQUIRE(verify_spacelike(s, 32).pass);
  std::vector<UV> path;
  for (int k = 0; k < 16; ++k) path.push_back({0.8 * std::cos(0.4 * k), 0.8 * std::sin(0.4 * k)});
  CHECK_NOTHROW((void)darboux_apparatus(make_surface_curve(s, path, false, 200)));
}
