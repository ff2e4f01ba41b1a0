#include "minkiso/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "minkiso/error.hpp"

namespace minkiso::io {

namespace {

[[noreturn]] void spec_error(const std::string& msg, std::size_t offset = 0) {
  throw ParseError(ErrorKind::InvalidSpec, offset, "surface spec", "invalid surface spec: " + msg);
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, const char* where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) spec_error(std::string("unknown key '") + key + "' in " + where);
  }
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json vec_json(const Vec3M& v) { return json::array({v[0], v[1], v[2]}); }

// NaN is not representable in JSON; it becomes null.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

SurfaceSpec parse_surface_spec(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    spec_error(e.what(), e.byte);
  }
  if (!j.is_object()) spec_error("top level must be an object");
  reject_unknown(j, {"kind", "name", "components", "domain", "periodic", "params"}, "surface spec");

  SurfaceSpec s;
  try {
    if (j.contains("kind")) s.kind = j.at("kind").get<std::string>();
    if (s.kind == "builtin") {
      if (!j.contains("name")) spec_error("builtin surface needs \"name\"");
      if (j.contains("components")) spec_error("\"components\" only applies to kind \"expr\"");
      s.name = j.at("name").get<std::string>();
    } else if (s.kind == "expr") {
      if (!j.contains("components")) spec_error("expr surface needs \"components\"");
      if (j.contains("name")) spec_error("\"name\" only applies to kind \"builtin\"");
      const json& c = j.at("components");
      if (c.is_string()) {
        // a single comma-separated string is accepted as well
        s.name = c.get<std::string>();
      } else {
        if (!c.is_array() || c.size() != 3) spec_error("\"components\" must be an array of three strings");
        for (std::size_t k = 0; k < 3; ++k) s.components[k] = c.at(k).get<std::string>();
      }
    } else {
      spec_error("\"kind\" must be \"builtin\" or \"expr\"");
    }
    if (j.contains("domain")) {
      const json& d = j.at("domain");
      if (!d.is_array() || d.size() != 4) spec_error("\"domain\" must be [u0,u1,v0,v1]");
      s.domain = Domain{d.at(0).get<double>(), d.at(1).get<double>(), d.at(2).get<double>(), d.at(3).get<double>()};
    }
    if (j.contains("periodic")) {
      const json& p = j.at("periodic");
      if (!p.is_array() || p.size() != 2) spec_error("\"periodic\" must be [bool,bool]");
      s.periodic = std::array<bool, 2>{p.at(0).get<bool>(), p.at(1).get<bool>()};
    }
    if (j.contains("params")) {
      const json& p = j.at("params");
      if (!p.is_object()) spec_error("\"params\" must be an object");
      for (const auto& [key, value] : p.items()) s.params[key] = value.get<double>();
    }
  } catch (const json::exception& e) {
    spec_error(e.what());
  }
  if (s.kind == "expr" && !s.params.empty()) spec_error("\"params\" only applies to builtin surfaces");
  return s;
}

json to_json(const SurfaceSpec& s) {
  json j;
  j["kind"] = s.kind;
  if (s.kind == "builtin") {
    j["name"] = s.name;
    if (!s.params.empty()) {
      json p = json::object();
      for (const auto& [k, v] : s.params) p[k] = v;
      j["params"] = p;
    }
  } else {
    j["components"] = json::array({s.components[0], s.components[1], s.components[2]});
  }
  if (s.domain) j["domain"] = json::array({s.domain->u0, s.domain->u1, s.domain->v0, s.domain->v1});
  if (s.periodic) j["periodic"] = json::array({(*s.periodic)[0], (*s.periodic)[1]});
  return j;
}

ParamSurface build_surface(const SurfaceSpec& s) {
  if (s.kind == "builtin") {
    ParamSurface base = builtin_surface(s.name, s.params, s.domain);
    if (!s.periodic) return base;
    return ParamSurface(base.name(), [base](double u, double v) { return base.jet(u, v); }, base.domain(),
                        (*s.periodic)[0], (*s.periodic)[1]);
  }
  if (!s.domain) spec_error("expr surface needs \"domain\"");
  const std::array<bool, 2> per = s.periodic.value_or(std::array<bool, 2>{false, false});
  if (!s.name.empty()) return parse_surface_expr(s.name, *s.domain, per[0], per[1]);
  return parse_surface_expr(s.components[0] + ", " + s.components[1] + ", " + s.components[2], *s.domain, per[0],
                            per[1]);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(ErrorKind::InvalidSpec, 0, "readable file", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << content;
}

ParamSurface load_surface(const std::string& path) { return build_surface(parse_surface_spec(read_file(path))); }

// ---------------------------------------------------------------------------
// CSV

CurveCsv read_curve_csv(std::istream& in) {
  CurveCsv out;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  bool has_s = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line == "s,x1,x2,x3") {
        has_s = true;
        continue;
      }
      if (line == "x1,x2,x3") continue;
      throw ParseError(ErrorKind::SyntaxError, 0, "header s,x1,x2,x3", "curve CSV: unexpected header '" + line + "'");
    }
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(cell, &used));
        if (used != cell.size() && cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError(ErrorKind::SyntaxError, lineno, "number",
                         "curve CSV line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    const std::size_t want = has_s ? 4 : 3;
    if (vals.size() != want) {
      throw ParseError(ErrorKind::SyntaxError, lineno, std::to_string(want) + " columns",
                       "curve CSV line " + std::to_string(lineno) + ": expected " + std::to_string(want) + " columns");
    }
    if (has_s) out.s.push_back(vals[0]);
    const std::size_t o = has_s ? 1 : 0;
    out.points.emplace_back(vals[o], vals[o + 1], vals[o + 2]);
  }
  return out;
}

void write_curve_csv(std::ostream& out, const SampledCurve& c) {
  out << "s,x1,x2,x3\n";
  for (std::size_t i = 0; i < c.size(); ++i) {
    out << fmt17(c.s[i]) << ',' << fmt17(c.p[i][0]) << ',' << fmt17(c.p[i][1]) << ',' << fmt17(c.p[i][2]) << '\n';
  }
}

void write_darboux_csv(std::ostream& out, const DarbouxData& d) {
  out << "s,u,v,T1,T2,T3,B1,B2,B3,N1,N2,N3,k_n,k_g,tau_g,dk_n,dtau_g,k_n_alt,tau_g_alt,phi\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << fmt17(d.s[i]) << ',' << fmt17(d.path[i].u) << ',' << fmt17(d.path[i].v);
    for (const Vec3M* v : {&d.T[i], &d.B[i], &d.N[i]}) {
      for (std::size_t c = 0; c < 3; ++c) out << ',' << fmt17((*v)[c]);
    }
    for (double x : {d.k_n[i], d.k_g[i], d.tau_g[i], d.dk_n[i], d.dtau_g[i], d.k_n_alt[i], d.tau_g_alt[i]}) {
      out << ',' << fmt17(x);
    }
    out << ',';
    if (d.phi[i]) out << fmt17(*d.phi[i]);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// JSON

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json to_json(const AxisSpec& a) {
  return json{{"d", vec_json(a.d)}, {"kind", std::string(to_string(a.kind))}, {"theta", a.theta}};
}

json to_json(const SpacelikeReport& r) {
  json j{{"pass", r.pass},
         {"grid_n", r.grid_n},
         {"min_E", num(r.min_E)},
         {"min_det", num(r.min_det)},
         {"min_normal_margin", num(r.min_normal_margin)},
         {"failing_nodes", r.failing_nodes}};
  if (r.failure) {
    j["failure"] = json{{"i", r.failure->i},
                        {"j", r.failure->j},
                        {"u", r.failure->u},
                        {"v", r.failure->v},
                        {"reason", r.failure->reason}};
  } else {
    j["failure"] = nullptr;
  }
  return j;
}

json polylines_to_json(const AxisSpec& axis, const std::vector<IsophotePolyline>& polys) {
  json paths = json::array(), traces = json::array(), closed = json::array();
  for (const auto& p : polys) {
    json path = json::array();
    for (const UV& q : p.path) path.push_back(json::array({q.u, q.v}));
    paths.push_back(std::move(path));
    json tr = json::array();
    for (const Vec3M& x : p.trace().p) tr.push_back(vec_json(x));
    traces.push_back(std::move(tr));
    closed.push_back(p.closed);
  }
  return json{{"axis", to_json(axis)}, {"level", axis.level()}, {"paths", paths}, {"traces", traces},
              {"closed", closed}};
}

json to_json(const AxisReport& r, bool verbose) {
  json j{{"kind", std::string(to_string(r.kind))},
         {"d_mean", vec_json(r.d_mean)},
         {"residual_max", num(r.residual_max)},
         {"residual_other_branch", num(r.residual_other)},
         {"theta_hat", r.theta_hat},
         {"mean", r.mean},
         {"constancy_cv", r.constancy_cv},
         {"sign_branch", std::string(to_string(r.sign_branch))},
         {"excluded_samples", r.excluded},
         {"samples", r.d_samples.size()},
         {"ds", r.ds},
         {"flags",
          {{"is_geodesic", r.flags.is_geodesic},
           {"is_line_of_curvature", r.flags.is_line_of_curvature},
           {"is_slant_helix", r.flags.is_slant_helix},
           {"psi_constant", r.flags.psi_constant},
           {"omega_constant", r.flags.omega_constant}}}};
  if (verbose) {
    json ds = json::array(), psi = json::array(), omega = json::array();
    for (const Vec3M& d : r.d_samples) ds.push_back(json::array({num(d[0]), num(d[1]), num(d[2])}));
    for (double x : r.psi) psi.push_back(num(x));
    for (double x : r.omega) omega.push_back(num(x));
    j["d_samples"] = ds;
    j["psi"] = psi;
    j["omega"] = omega;
  }
  return j;
}

json to_json(const AngleReport& r) {
  return json{{"samples", r.samples},
              {"flagged", r.flagged},
              {"theta_mean", num(r.theta_mean)},
              {"max_discrepancy", num(r.max_discrepancy)}};
}

json to_json(const GaussImageReport& r) {
  return json{{"normal_residual", r.normal_residual}, {"latitude_spread", r.latitude_spread},
              {"latitude_pass", r.latitude_pass},     {"degenerate", r.degenerate},
              {"curvature_residual", r.curvature_residual}, {"curvature_pass", r.curvature_pass},
              {"pass", r.pass}};
}

json to_json(const ClassifyReport& r) {
  json battery = json::array();
  for (const auto& b : r.battery) {
    battery.push_back(json{{"name", b.name}, {"applicable", b.applicable}, {"pass", b.pass}, {"note", b.note}});
  }
  return json{{"flags",
               {{"is_geodesic", r.flags.is_geodesic},
                {"is_line_of_curvature", r.flags.is_line_of_curvature},
                {"is_slant_helix", r.flags.is_slant_helix}}},
              {"epsilon", r.epsilon ? json(*r.epsilon) : json(nullptr)},
              {"max_abs_k_g", r.max_abs_k_g},
              {"max_abs_tau_g", r.max_abs_tau_g},
              {"min_abs_T_d", num(r.min_abs_T_d)},
              {"max_abs_T_d", r.max_abs_T_d},
              {"min_abs_B_d", num(r.min_abs_B_d)},
              {"max_abs_tau", r.max_abs_tau},
              {"battery", battery},
              {"all_pass", r.all_pass()}};
}

json to_json(const RelationReport& r) {
  return json{{"epsilon", r.epsilon},
              {"samples", r.samples},
              {"curvature_residual", r.curvature_residual},
              {"angle_relations_applicable", r.angle_relations_applicable},
              {"k_n_residual", r.k_n_residual},
              {"k_g_residual", r.k_g_residual},
              {"tau_g_residual", r.tau_g_residual},
              {"tau_g_residual_plus_phi", r.tau_g_residual_literal}};
}

json to_json(const AsymptoticReport& r) {
  return json{{"applicable", r.applicable},
              {"pass", r.pass},
              {"worst_margin", num(r.worst_margin)},
              {"samples", r.samples},
              {"note", r.note}};
}

PolylineDoc parse_polylines(std::string_view text) {
  PolylineDoc doc;
  try {
    const json j = json::parse(text.begin(), text.end());
    if (j.contains("axis")) {
      const json& a = j.at("axis");
      const auto d = a.at("d").get<std::array<double, 3>>();
      const std::string kind = a.at("kind").get<std::string>();
      doc.axis = AxisSpec::make(Vec3M(d[0], d[1], d[2]), kind == "spacelike" ? AxisKind::Spacelike : AxisKind::Timelike,
                                a.at("theta").get<double>());
    }
    doc.level = j.value("level", 0.0);
    for (const json& p : j.at("paths")) {
      std::vector<UV> path;
      for (const json& q : p) path.push_back({q.at(0).get<double>(), q.at(1).get<double>()});
      doc.paths.push_back(std::move(path));
    }
    for (const json& t : j.at("traces")) {
      std::vector<Vec3M> tr;
      for (const json& x : t) tr.emplace_back(x.at(0).get<double>(), x.at(1).get<double>(), x.at(2).get<double>());
      doc.traces.push_back(std::move(tr));
    }
    if (j.contains("closed")) {
      for (const json& c : j.at("closed")) doc.closed.push_back(c.get<bool>());
    }
  } catch (const json::parse_error& e) {
    throw ParseError(ErrorKind::SyntaxError, e.byte, "polyline JSON", e.what());
  } catch (const json::exception& e) {
    throw ParseError(ErrorKind::InvalidSpec, 0, "polyline JSON", std::string("polyline JSON: ") + e.what());
  }
  // closed flags default to "first vertex repeated"
  while (doc.closed.size() < doc.paths.size()) {
    const auto& p = doc.paths[doc.closed.size()];
    doc.closed.push_back(p.size() > 2 && p.front() == p.back());
  }
  return doc;
}

std::string contours_svg(const ParamSurface& surface, const std::vector<IsophotePolyline>& polys, double width) {
  const Domain& d = surface.domain();
  const double margin = 20.0;
  const double height = width * d.v_span() / d.u_span();
  auto x = [&](double u) { return margin + (u - d.u0) / d.u_span() * width; };
  auto y = [&](double v) { return margin + (d.v1 - v) / d.v_span() * height; };
  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width + 2 * margin << "\" height=\""
     << height + 2 * margin << "\">\n";
  os << "  <rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width << "\" height=\"" << height
     << "\" fill=\"none\" stroke=\"#888\"/>\n";
  os << "  <text x=\"" << margin << "\" y=\"" << margin - 6 << "\" font-size=\"11\">" << surface.name() << "  u in ["
     << d.u0 << ", " << d.u1 << "], v in [" << d.v0 << ", " << d.v1 << "]</text>\n";
  for (std::size_t k = 0; k < polys.size(); ++k) {
    const auto& path = polys[k].path;
    std::string stroke;
    for (std::size_t i = 0; i < path.size(); ++i) {
      const bool jump = i > 0 && ((surface.periodic_u() && std::abs(path[i].u - path[i - 1].u) > 0.5 * d.u_span()) ||
                                  (surface.periodic_v() && std::abs(path[i].v - path[i - 1].v) > 0.5 * d.v_span()));
      std::ostringstream pt;
      pt.precision(6);
      pt << (i == 0 || jump ? "M" : "L") << x(path[i].u) << ' ' << y(path[i].v) << ' ';
      stroke += pt.str();
    }
    os << "  <path d=\"" << stroke << "\" fill=\"none\" stroke=\"" << (polys[k].closed ? "#c03" : "#06c")
       << "\" stroke-width=\"1.2\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace minkiso::io
