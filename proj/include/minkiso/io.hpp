#pragma once

// File formats: surface spec JSON, curve CSV, polyline / report JSON, Darboux CSV, SVG.
// JSON objects use sorted keys and shortest round-trip floats, so equal inputs give
// byte-identical documents.

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "minkiso/axis.hpp"
#include "minkiso/isophote.hpp"
#include "minkiso/surface.hpp"

namespace minkiso::io {

using nlohmann::json;

/// { "kind": "builtin" | "expr", "name" | "components", "domain": [u0,u1,v0,v1],
///   "periodic": [bool,bool], "params": {...} }
struct SurfaceSpec {
  std::string kind = "builtin";
  std::string name;                       // builtin
  std::array<std::string, 3> components;  // expr
  std::optional<Domain> domain;
  std::optional<std::array<bool, 2>> periodic;
  SurfaceParams params;
};

/// Throws ParseError(InvalidSpec) on malformed JSON, unknown keys or wrong types.
SurfaceSpec parse_surface_spec(std::string_view text);
json to_json(const SurfaceSpec& spec);
ParamSurface build_surface(const SurfaceSpec& spec);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);
ParamSurface load_surface(const std::string& path);

/// Header "s,x1,x2,x3" (or "x1,x2,x3"), one point per row.
struct CurveCsv {
  std::vector<double> s;
  std::vector<Vec3M> points;
};
CurveCsv read_curve_csv(std::istream& in);
void write_curve_csv(std::ostream& out, const SampledCurve& curve);

void write_darboux_csv(std::ostream& out, const DarbouxData& darboux);

/// Pretty-printed with a trailing newline.
std::string dump(const json& j);

json to_json(const AxisSpec& axis);
json to_json(const SpacelikeReport& rep);
/// { "axis", "level", "closed", "paths", "traces" }
json polylines_to_json(const AxisSpec& axis, const std::vector<IsophotePolyline>& polys);
/// Per-sample arrays only when `verbose`.
json to_json(const AxisReport& rep, bool verbose);
json to_json(const AngleReport& rep);
json to_json(const GaussImageReport& rep);
json to_json(const ClassifyReport& rep);
json to_json(const RelationReport& rep);
json to_json(const AsymptoticReport& rep);

/// Polyline document as read back: paths and traces with closed flags.
struct PolylineDoc {
  std::optional<AxisSpec> axis;
  double level = 0.0;
  std::vector<std::vector<UV>> paths;
  std::vector<std::vector<Vec3M>> traces;
  std::vector<bool> closed;
};
PolylineDoc parse_polylines(std::string_view text);

/// Parameter-domain contours; seams of periodic directions break the stroke.
std::string contours_svg(const ParamSurface& surface, const std::vector<IsophotePolyline>& polys,
                         double width = 640.0);

}  // namespace minkiso::io
