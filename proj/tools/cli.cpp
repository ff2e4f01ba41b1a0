#include "minkiso/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "minkiso/axis.hpp"
#include "minkiso/io.hpp"
#include "minkiso/isophote.hpp"
#include "minkiso/surface.hpp"

namespace minkiso::cli {

using io::json;

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument:
      return kUsage;
    case ErrorKind::SyntaxError:
    case ErrorKind::UnknownIdentifier:
    case ErrorKind::InvalidSpec:
    case ErrorKind::UnknownSurface:
    case ErrorKind::BadParams:
    case ErrorKind::SilhouetteUndefined:
      return kInputParse;
    case ErrorKind::NotAnIsophote:
    case ErrorKind::InfeasibleAngle:
      return kNotAnIsophote;
    default:
      return kGeometry;
  }
}

namespace {

struct Common {
  std::string surface;
  std::string output;
};

struct AxisArgs {
  std::string kind;
  std::string d;
  double theta = 0.0;
};

Vec3M parse_vector(const std::string& text) {
  std::stringstream ss(text);
  std::string cell;
  std::vector<double> v;
  while (std::getline(ss, cell, ',')) {
    try {
      v.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "--d expects three comma-separated numbers, got '" + text + "'");
    }
  }
  if (v.size() != 3) throw Error(ErrorKind::InvalidArgument, "--d expects three comma-separated numbers");
  return Vec3M(v[0], v[1], v[2]);
}

AxisKind parse_kind(const std::string& s) {
  if (s == "timelike") return AxisKind::Timelike;
  if (s == "spacelike") return AxisKind::Spacelike;
  throw Error(ErrorKind::InvalidArgument, "--axis-kind must be timelike or spacelike");
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    io::write_file(path, text);
  }
}

AxisOptions options_for(const ParamSurface& s, double cv_threshold) {
  AxisOptions o;
  const bool fd = s.jet_source() == JetSource::FiniteDifference;
  o.cv_threshold = cv_threshold > 0.0 ? cv_threshold : (fd ? 1e-2 : 1e-3);
  if (fd) o.flag_tol = 1e-4;
  return o;
}

// ---------------------------------------------------------------------------

int cmd_check(const Common& c, std::size_t grid, std::ostream& out, std::ostream& err) {
  const ParamSurface s = io::load_surface(c.surface);
  const SpacelikeReport rep = verify_spacelike(s, grid);
  emit(c.output, io::dump(io::to_json(rep)), out);
  if (!rep.pass) {
    err << "surface is not spacelike: " << rep.failing_nodes << " failing nodes; first at cell (" << rep.failure->i
        << ", " << rep.failure->j << "), (u,v) = (" << rep.failure->u << ", " << rep.failure->v
        << "): " << rep.failure->reason << "\n";
    return kGeometry;
  }
  return kOk;
}

int cmd_extract(const Common& c, const AxisArgs& a, std::size_t grid, double tol, std::size_t samples,
                const std::string& svg, const std::string& csv_prefix, std::ostream& out, std::ostream& err) {
  const AxisSpec axis = AxisSpec::make(parse_vector(a.d), parse_kind(a.kind), a.theta);
  if (axis.flipped) err << "warning: past-pointing timelike d replaced by -d\n";
  const ParamSurface s = io::load_surface(c.surface);
  ExtractStats stats;
  ExtractOptions opts;
  opts.samples = samples;
  const auto polys = extract_isophotes(s, axis, grid, tol, opts, &stats);
  if (polys.empty()) {
    err << "empty level set: level " << axis.level() << " outside the attainable range [" << stats.field_min << ", "
        << stats.field_max << "] of <N,d>\n";
  }
  emit(c.output, io::dump(io::polylines_to_json(axis, polys)), out);
  if (!svg.empty()) io::write_file(svg, io::contours_svg(s, polys));
  if (!csv_prefix.empty()) {
    for (std::size_t k = 0; k < polys.size(); ++k) {
      std::ostringstream os;
      io::write_curve_csv(os, polys[k].trace());
      io::write_file(csv_prefix + "_" + std::to_string(k) + ".csv", os.str());
    }
  }
  return kOk;
}

SurfaceCurve curve_from_csv(const ParamSurface& s, const std::string& path, bool closed, std::size_t samples) {
  std::ifstream in(path);
  if (!in) throw ParseError(ErrorKind::InvalidSpec, 0, "readable file", "cannot read '" + path + "'");
  const io::CurveCsv csv = io::read_curve_csv(in);
  const std::size_t n = samples > 0 ? samples : std::max<std::size_t>(csv.points.size(), 5);
  return surface_curve_from_points(s, csv.points, closed, n);
}

json axis_analysis(const DarbouxData& dd, AxisKind kind, const AxisOptions& opts, double verify_tol, bool verbose,
                   bool& not_isophote, std::ostream& err) {
  json j;
  try {
    const AxisReport rep = reconstruct_axis(dd, kind, opts);
    j["report"] = io::to_json(rep, verbose);
    j["verify_axis_constant"] = verify_axis_constant(rep, verify_tol);
    j["gauss_image"] = io::to_json(gauss_image_check(dd, rep));
    j["normal_derivative_orthogonality"] = normal_derivative_orthogonality(dd, rep);
    j["classify"] = io::to_json(classify(dd, dd.frenet, rep, opts));
    try {
      j["angle_consistency"] = io::to_json(angle_consistency(dd, rep));
    } catch (const Error& e) {
      j["angle_consistency"] = json{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
    }
  } catch (const NotAnIsophote& e) {
    not_isophote = true;
    err << to_string(e.kind()) << ": " << e.what() << "\n";
    j["error"] = std::string(to_string(e.kind()));
    j["message"] = e.what();
  }
  return j;
}

int cmd_analyze(const Common& c, const std::string& curve, bool closed, std::size_t samples,
                const std::string& kind, const std::string& darboux_csv, std::ostream& out, std::ostream& err) {
  const ParamSurface s = io::load_surface(c.surface);
  const SurfaceCurve sc = curve_from_csv(s, curve, closed, samples);
  const DarbouxData dd = darboux_apparatus(sc);
  if (!darboux_csv.empty()) {
    std::ostringstream os;
    io::write_darboux_csv(os, dd);
    io::write_file(darboux_csv, os.str());
  }
  const AxisOptions opts = options_for(s, 0.0);
  json j;
  j["samples"] = dd.size();
  j["closed"] = dd.closed;
  j["length"] = sc.trace.length;
  double kn_route = 0.0, tg_route = 0.0;
  for (std::size_t i = 0; i < dd.size(); ++i) {
    kn_route = std::max(kn_route, std::abs(dd.k_n[i] - dd.k_n_alt[i]));
    tg_route = std::max(tg_route, std::abs(dd.tau_g[i] - dd.tau_g_alt[i]));
  }
  j["dual_route_residual"] = json{{"k_n", kn_route}, {"tau_g", tg_route}};
  if (dd.frenet) {
    j["frenet"] = json{{"epsilon", dd.frenet->epsilon}, {"is_slant_helix", is_slant_helix(*dd.frenet, opts.slant_tol)}};
    j["relation"] = io::to_json(relation_check(dd, *dd.frenet));
    j["asymptotic"] = io::to_json(no_asymptotic_check(dd, *dd.frenet));
  } else {
    j["frenet"] = nullptr;
  }
  json axes = json::object();
  bool dummy = false;
  std::ostringstream quiet;
  if (kind.empty() || kind == "timelike") {
    axes["timelike"] = axis_analysis(dd, AxisKind::Timelike, opts, 1e-3, false, dummy, kind.empty() ? quiet : err);
  }
  if (kind.empty() || kind == "spacelike") {
    axes["spacelike"] = axis_analysis(dd, AxisKind::Spacelike, opts, 1e-3, false, dummy, kind.empty() ? quiet : err);
  }
  if (!kind.empty() && kind != "timelike" && kind != "spacelike") parse_kind(kind);
  j["axis"] = axes;
  emit(c.output, io::dump(j), out);
  return kOk;
}

int cmd_axis(const Common& c, const std::string& curve, const std::string& polylines, long index, bool closed,
             std::size_t samples, std::string kind, double cv, double tol, bool verbose, std::ostream& out,
             std::ostream& err) {
  const ParamSurface s = io::load_surface(c.surface);
  std::vector<SurfaceCurve> curves;
  if (!curve.empty()) {
    curves.push_back(curve_from_csv(s, curve, closed, samples));
  } else {
    const io::PolylineDoc doc = io::parse_polylines(io::read_file(polylines));
    if (kind.empty() && doc.axis) kind = std::string(to_string(doc.axis->kind));
    for (std::size_t k = 0; k < doc.traces.size(); ++k) {
      if (index >= 0 && static_cast<std::size_t>(index) != k) continue;
      const auto& tr = doc.traces[k];
      const std::size_t n = samples > 0 ? samples : tr.size();
      curves.push_back(surface_curve_from_points(s, tr, doc.closed[k], n));
    }
    if (index >= 0 && curves.empty()) throw Error(ErrorKind::InvalidArgument, "--index out of range");
  }
  if (kind.empty()) throw Error(ErrorKind::InvalidArgument, "--axis-kind is required");
  const AxisKind ak = parse_kind(kind);
  const AxisOptions opts = options_for(s, cv);
  bool not_isophote = false;
  json results = json::array();
  for (const SurfaceCurve& sc : curves) {
    const DarbouxData dd = darboux_apparatus(sc);
    results.push_back(axis_analysis(dd, ak, opts, tol, verbose, not_isophote, err));
  }
  emit(c.output, io::dump(json{{"axis_kind", kind}, {"results", results}}), out);
  return not_isophote ? kNotAnIsophote : kOk;
}

int cmd_fixtures(const std::string& dir, std::ostream& out) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const double two_pi = 2.0 * std::numbers::pi;
  auto path = [&](const char* name) { return (fs::path(dir) / name).string(); };

  io::SurfaceSpec hyp;
  hyp.kind = "builtin";
  hyp.name = "hyperboloid";
  io::write_file(path("hyperboloid.json"), io::dump(io::to_json(hyp)));

  io::SurfaceSpec expr;
  expr.kind = "expr";
  expr.components = {"cosh(u)", "sinh(u)*cos(v)", "sinh(u)*sin(v)"};
  expr.domain = Domain{0.1, 2.0, 0.0, two_pi};
  expr.periodic = std::array<bool, 2>{false, true};
  io::write_file(path("hyperboloid_expr.json"), io::dump(io::to_json(expr)));

  io::SurfaceSpec sheet;
  sheet.kind = "builtin";
  sheet.name = "spacelike_graph";
  sheet.params = {{"gu", 2.0}};
  io::write_file(path("timelike_sheet.json"), io::dump(io::to_json(sheet)));

  // latitude u = 1 (closed, first sample not repeated) and meridian v = 0.7
  const double sh = std::sinh(1.0), ch = std::cosh(1.0);
  SampledCurve lat;
  lat.closed = true;
  lat.length = two_pi * sh;
  constexpr std::size_t n_lat = 512;
  for (std::size_t k = 0; k < n_lat; ++k) {
    const double v = two_pi * static_cast<double>(k) / n_lat;
    lat.s.push_back(sh * v);
    lat.p.emplace_back(ch, sh * std::cos(v), sh * std::sin(v));
  }
  SampledCurve mer;
  mer.closed = false;
  constexpr std::size_t n_mer = 401;
  const double v0 = 0.7;
  for (std::size_t k = 0; k < n_mer; ++k) {
    const double u = 0.1 + 1.9 * static_cast<double>(k) / (n_mer - 1);
    mer.s.push_back(u - 0.1);
    mer.p.emplace_back(std::cosh(u), std::sinh(u) * std::cos(v0), std::sinh(u) * std::sin(v0));
  }
  mer.length = 1.9;
  for (auto [name, curve] : {std::pair{"latitude.csv", &lat}, std::pair{"meridian.csv", &mer}}) {
    std::ostringstream os;
    io::write_curve_csv(os, *curve);
    io::write_file(path(name), os.str());
  }

  const double coth1 = ch / sh;
  json expected{
      {"latitude",
       {{"surface", "hyperboloid.json"},
        {"curve", "latitude.csv"},
        {"closed", true},
        {"k_n", 1.0},
        {"abs_k_g", coth1},
        {"tau_g", 0.0},
        {"kappa", 1.0 / sh},
        {"epsilon", 1},
        {"abs_psi", coth1},
        {"theta", 1.0},
        {"d", json::array({1.0, 0.0, 0.0})},
        {"N_dot_d", -ch}}},
      {"meridian",
       {{"surface", "hyperboloid.json"},
        {"curve", "meridian.csv"},
        {"closed", false},
        {"k_n", 1.0},
        {"k_g", 0.0},
        {"tau_g", 0.0},
        {"kappa", 1.0},
        {"epsilon", -1},
        {"psi", 0.0},
        {"timelike_axis", "NotAnIsophote (InfeasibleAngle)"}}},
      {"spacelike_section",
       {{"surface", "hyperboloid.json"},
        {"axis", json{{"kind", "spacelike"}, {"d", json::array({0.0, 1.0, 0.0})}, {"theta", 0.5}}},
        {"level", std::sinh(0.5)},
        {"abs_omega", std::tanh(0.5)},
        {"epsilon", -1},
        {"tau", 0.0}}},
      {"extract_latitude",
       {{"surface", "hyperboloid.json"},
        {"axis", json{{"kind", "timelike"}, {"d", json::array({1.0, 0.0, 0.0})}, {"theta", 1.0}}},
        {"level", -ch},
        {"polylines", 1},
        {"closed", true},
        {"u", 1.0}}},
      {"timelike_sheet", {{"surface", "timelike_sheet.json"}, {"spacelike", false}}}};
  io::write_file(path("expected.json"), io::dump(expected));
  out << "fixtures written to " << dir << "\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Isophote curves on spacelike surfaces in Minkowski 3-space"};
  app.name("isophote");
  app.require_subcommand(1);

  Common common;
  AxisArgs axis_args;
  std::size_t grid = 256;
  std::size_t check_grid = 64;
  double refine_tol = 1e-8;
  std::size_t samples = 0;
  std::string svg, csv_prefix, curve, polylines, darboux_csv, fixtures_dir = "fixtures";
  bool closed = false, verbose = false;
  long index = -1;
  double cv = 0.0, verify_tol = 1e-3;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--surface", common.surface, "Surface spec JSON")->required();
    sub->add_option("-o,--output", common.output, "Output file (default: stdout)");
  };

  CLI::App* check = app.add_subcommand("check-surface", "Grid check that the surface is spacelike");
  add_common(check);
  check->add_option("--grid", check_grid, "Nodes per axis")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 14));

  CLI::App* extract = app.add_subcommand("extract", "Extract isophotes as polylines");
  add_common(extract);
  extract->add_option("--axis-kind", axis_args.kind, "timelike | spacelike")->required();
  extract->add_option("--d", axis_args.d, "Axis vector d1,d2,d3")->required();
  extract->add_option("--theta", axis_args.theta, "Hyperbolic angle theta > 0")->required();
  extract->add_option("--grid", grid, "Grid nodes per axis")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 14));
  extract->add_option("--refine-tol", refine_tol, "Bound on |<N,d> - level| at vertices");
  extract->add_option("--samples", samples, "Trace samples per polyline (0: automatic)");
  extract->add_option("--svg", svg, "Write parameter-domain contours as SVG");
  extract->add_option("--csv", csv_prefix, "Write traces as PREFIX_<k>.csv");

  std::string analyze_kind;
  CLI::App* analyze = app.add_subcommand("analyze", "Darboux data and classification battery for a curve CSV");
  add_common(analyze);
  analyze->add_option("--curve", curve, "Curve CSV (s,x1,x2,x3)")->required();
  analyze->add_flag("--closed", closed, "Curve is closed");
  analyze->add_option("--samples", samples, "Resampled size (0: as input)");
  analyze->add_option("--axis-kind", analyze_kind, "timelike | spacelike (default: both)");
  analyze->add_option("--darboux", darboux_csv, "Write Darboux data CSV");

  std::string axis_kind;
  CLI::App* axis = app.add_subcommand("axis", "Reconstruct the isophote axis");
  add_common(axis);
  auto* curve_opt = axis->add_option("--curve", curve, "Curve CSV (s,x1,x2,x3)");
  auto* poly_opt = axis->add_option("--polylines", polylines, "Polyline JSON from extract");
  curve_opt->excludes(poly_opt);
  axis->add_option("--index", index, "Only this polyline of --polylines");
  axis->add_flag("--closed", closed, "Curve CSV is closed");
  axis->add_option("--samples", samples, "Resampled size (0: as input)");
  axis->add_option("--axis-kind", axis_kind, "timelike | spacelike (default: from --polylines)");
  axis->add_option("--cv-threshold", cv, "Constancy threshold (default 1e-3, 1e-2 for parsed surfaces)");
  axis->add_option("--tol", verify_tol, "Tolerance of verify_axis_constant");
  axis->add_flag("-v,--verbose", verbose, "Include per-sample arrays");

  CLI::App* fixtures = app.add_subcommand("fixtures", "Write hyperboloid fixtures and expected values");
  fixtures->add_option("--dir", fixtures_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*check) return cmd_check(common, check_grid, out, err);
    if (*extract) return cmd_extract(common, axis_args, grid, refine_tol, samples, svg, csv_prefix, out, err);
    if (*analyze) return cmd_analyze(common, curve, closed, samples, analyze_kind, darboux_csv, out, err);
    if (*axis) {
      if (curve.empty() && polylines.empty()) {
        err << "axis: one of --curve or --polylines is required\n";
        return kUsage;
      }
      return cmd_axis(common, curve, polylines, index, closed, samples, axis_kind, cv, verify_tol, verbose, out, err);
    }
    if (*fixtures) return cmd_fixtures(fixtures_dir, out);
  } catch (const CellError& e) {
    err << to_string(e.kind()) << " at (u,v) = (" << e.u() << ", " << e.v() << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const Error& e) {
    err << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kGeometry;
  }
  return kUsage;
}

}  // namespace minkiso::cli
