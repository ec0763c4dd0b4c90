#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "angbill/angular.hpp"
#include "angbill/birkhoff.hpp"
#include "angbill/curve.hpp"
#include "angbill/error.hpp"
#include "angbill/integrability.hpp"
#include "angbill/polynomial.hpp"

namespace angbill::io {

using json = nlohmann::json;

/// Shortest text that round-trips a double.
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, path + ": " + e.what());
  }
}

/// [[i, j, c], ...] or {"poly": [[i, j, c], ...]}.
inline BivariatePoly parse_poly(const json& j) {
  const json& terms = j.is_object() ? j.at("poly") : j;
  if (!terms.is_array()) throw Error(ErrorCode::InvalidInput, "polynomial must be a list of [i, j, c]");
  BivariatePoly f;
  for (const auto& t : terms) {
    if (!t.is_array() || t.size() != 3) throw Error(ErrorCode::InvalidInput, "polynomial term must be [i, j, c]");
    const int i = t[0].get<int>(), k = t[1].get<int>();
    if (i < 0 || k < 0) throw Error(ErrorCode::InvalidInput, "negative exponent");
    f.add_term(i, k, t[2].get<double>());
  }
  return f;
}

inline json poly_to_json(const BivariatePoly& f) {
  json a = json::array();
  for (const auto& t : f.terms()) a.push_back({t.i, t.j, t.c});
  return a;
}

inline CurveValidation parse_validation(const json& j) {
  CurveValidation v;
  if (j.contains("allow_flat")) v.allow_flat = j["allow_flat"].get<bool>();
  if (j.contains("grid")) v.grid = j["grid"].get<int>();
  return v;
}

/// {"kind": "ellipse", "a", "b"} | {"kind": "offset_circle", "R", "x0"} |
/// {"kind": "trig_poly", "c0", "cos": [...], "sin": [...]} |
/// {"kind": "implicit", "poly": [[i, j, c], ...], "allow_flat"}.
inline SupportCurve parse_curve(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const CurveValidation v = parse_validation(j);
    if (kind == "ellipse") return make_ellipse(j.at("a").get<double>(), j.at("b").get<double>(), v);
    if (kind == "offset_circle") return make_offset_circle(j.at("R").get<double>(), j.at("x0").get<double>(), v);
    if (kind == "trig_poly")
      return make_trig_poly(j.at("c0").get<double>(), j.value("cos", std::vector<double>{}),
                            j.value("sin", std::vector<double>{}), v);
    if (kind == "implicit") return make_implicit_support(parse_poly(j.at("poly")), v);
    throw Error(ErrorCode::InvalidInput, "unknown curve kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("curve: ") + e.what());
  }
}

/// {"terms": [[sigma, vx, vy, c], ...], "degree": n}; degree defaults to the
/// largest term degree.
inline IntegralPoly parse_integral(const json& j) {
  try {
    std::vector<Term3> raw;
    int n = 0;
    for (const auto& t : j.at("terms")) {
      if (!t.is_array() || t.size() != 4) throw Error(ErrorCode::InvalidInput, "integral term must be [s, vx, vy, c]");
      raw.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>(), t[3].get<double>()});
      n = std::max(n, raw.back().degree());
    }
    if (j.contains("degree")) n = j["degree"].get<int>();
    return homogenize_integral(raw, n);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("integral: ") + e.what());
  }
}

inline void write_angular_csv(std::ostream& os, const SupportCurve& curve, const AngularOrbit& orb) {
  os << "step,x,y,phi,r,phibar,delta,case\n";
  const PlanePoint o = curve.origin();
  for (std::size_t i = 0; i < orb.states.size(); ++i) {
    const AngularState& s = orb.states[i];
    const PlanePoint q = o + s.point();
    os << i << ',' << num(q.x) << ',' << num(q.y) << ',' << num(s.phi) << ',' << num(s.r) << ',';
    if (i < orb.diagnostics.size()) {
      const StepDiagnostics& d = orb.diagnostics[i];
      os << num(d.phibar) << ',' << num(d.delta) << ',' << to_string(d.map_case);
    } else {
      os << ",,";
    }
    os << '\n';
  }
}

inline void write_birkhoff_csv(std::ostream& os, const std::vector<BilliardLineState>& orb,
                               const std::optional<IntegralPoly>& phi) {
  os << "step,phi,p,hit_x,hit_y,integral_value\n";
  for (std::size_t i = 0; i < orb.size(); ++i) {
    const BilliardLineState& s = orb[i];
    os << i << ',' << num(s.line.phi) << ',' << num(s.line.p) << ',';
    if (s.has_hit) os << num(s.last_hit.x) << ',' << num(s.last_hit.y);
    else os << ',';
    os << ',';
    if (phi) os << num(eval_integral(*phi, s.line));
    os << '\n';
  }
}

/// Points of an orbit CSV written by either writer (x,y or hit_x,hit_y).
inline std::vector<PlanePoint> read_orbit_points(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::InvalidInput, "empty CSV");
  std::vector<std::string> head;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) head.push_back(cell);
  }
  auto col = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < head.size(); ++i)
      if (head[i] == name) return static_cast<int>(i);
    return -1;
  };
  int cx = col("x"), cy = col("y");
  if (cx < 0 || cy < 0) cx = col("hit_x"), cy = col("hit_y");
  if (cx < 0 || cy < 0) throw Error(ErrorCode::InvalidInput, "CSV has no x,y or hit_x,hit_y columns");
  std::vector<PlanePoint> out;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) <= std::max(cx, cy) || cells[cx].empty() || cells[cy].empty()) continue;
    out.push_back({std::stod(cells[cx]), std::stod(cells[cy])});
  }
  return out;
}

inline json certificate_to_json(const Certificate& c) {
  json w = json::array();
  for (const auto& p : c.witnesses)
    w.push_back({{"x", p.point.x}, {"y", p.point.y},
                 {"kind", p.kind == PointKind::inflection ? "inflection" : "singular"}});
  const FlexOptions& f = c.options.flex;
  return {{"verdict", to_string(c.verdict)},
          {"witnesses", w},
          {"assumptions", c.assumptions},
          {"tolerances",
           {{"bisect_tol", f.bisect_tol},
            {"h_tol", f.h_tol},
            {"singular_grid", f.singular_grid},
            {"bbox_inflate", f.bbox_inflate},
            {"cluster_radius", f.cluster_radius},
            {"grad_tol", f.grad_tol},
            {"f_tol", f.f_tol},
            {"origin_exclusion", c.options.origin_exclusion},
            {"verify_tol", c.options.verify_tol}}}};
}

struct SvgLayer {
  std::vector<PlanePoint> points;
  std::string color;
  bool polyline = false;
  bool closed = false;
};

/// Static SVG 1.1 phase portrait; the view box fits the orbit and curve layers.
inline std::string render_svg(const std::vector<SvgLayer>& layers, int width = 640, int height = 640) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& l : layers)
    for (const auto& p : l.points) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
      xmin = std::min(xmin, p.x), xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y), ymax = std::max(ymax, p.y);
    }
  if (xmin > xmax) xmin = ymin = -1, xmax = ymax = 1;
  const double pad = 0.05 * std::max({xmax - xmin, ymax - ymin, 1e-9});
  xmin -= pad, xmax += pad, ymin -= pad, ymax += pad;
  const double s = std::min(width / (xmax - xmin), height / (ymax - ymin));
  auto X = [&](double x) { return num((x - xmin) * s); };
  auto Y = [&](double y) { return num((ymax - y) * s); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
     << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& l : layers) {
    if (l.points.empty()) continue;
    if (l.polyline) {
      os << (l.closed ? "<polygon" : "<polyline") << " fill=\"none\" stroke=\"" << l.color
         << "\" stroke-width=\"1\" points=\"";
      for (const auto& p : l.points)
        if (std::isfinite(p.x) && std::isfinite(p.y)) os << X(p.x) << ',' << Y(p.y) << ' ';
      os << "\"/>\n";
    } else {
      for (const auto& p : l.points)
        if (std::isfinite(p.x) && std::isfinite(p.y))
          os << "<circle cx=\"" << X(p.x) << "\" cy=\"" << Y(p.y) << "\" r=\"1.5\" fill=\"" << l.color << "\"/>\n";
    }
  }
  os << "<circle cx=\"" << X(0) << "\" cy=\"" << Y(0) << "\" r=\"2.5\" fill=\"black\"/>\n</svg>\n";
  return os.str();
}

}  // namespace angbill::io
