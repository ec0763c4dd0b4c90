#pragma once

#include <cmath>
#include <vector>

#include "angbill/curve.hpp"
#include "angbill/error.hpp"
#include "angbill/geometry.hpp"
#include "angbill/roots.hpp"

namespace angbill {

/// Exterior point of Gamma in polar form about O.
struct AngularState {
  double phi = 0.0;
  double r = 0.0;

  PlanePoint point() const { return r * unit(phi); }
  static AngularState from_point(PlanePoint P) { return {polar_angle(P), norm(P)}; }
};

/// Position of O relative to the tangent line through A, by the angle ATO.
enum class MapCase { case1, case2, case3 };

inline const char* to_string(MapCase c) {
  switch (c) {
    case MapCase::case1: return "case1";
    case MapCase::case2: return "case2";
    case MapCase::case3: return "case3";
  }
  return "?";
}

/// `direct` when the image lies on the ray of angle phi2, `antipodal` when the
/// line l_A meets the tangent on the opposite ray (r2 < 0 in the polar form).
enum class Branch { direct, antipodal };

struct StepDiagnostics {
  double phibar = 0.0;  ///< tangency angle
  double delta = 0.0;   ///< phibar - phi1
  PlanePoint tangency;
  MapCase map_case = MapCase::case1;
  Branch branch = Branch::direct;
  double phi2_raw = 0.0;  ///< 2 phibar - phi1, unwrapped
  double r2_raw = 0.0;    ///< signed r2 from the polar formula
};

struct AngularOptions {
  int scan_cells = 256;
  RootOptions root{};
  double exterior_margin = 1e-10;
  /// Minimum |r cos(delta) - r' sin(delta)| before the image is declared at infinity.
  double s_curve_tol = 1e-8;
  double case1_tol = 1e-12;
};

struct AngularStep {
  AngularState next;
  StepDiagnostics diag;
};

inline void require_exterior(const SupportCurve& curve, const AngularState& s, const AngularOptions& opt) {
  if (!(s.r > curve.r(s.phi) + opt.exterior_margin))
    throw Error(ErrorCode::InteriorPoint, "point is not strictly outside the curve");
}

/// Tangency angle of the right tangent from A: the root of
/// r_A (r cos d + r' sin d) - r^2 = 0 at phibar = phi_A + d with d in (0, pi).
inline double tangent_from_point(const SupportCurve& curve, const AngularState& A,
                                 const AngularOptions& opt = {}) {
  require_exterior(curve, A, opt);
  auto fdf = [&](double d) {
    const Jet j = curve.position(A.phi + d);
    const double c = std::cos(d), s = std::sin(d);
    const double g = A.r * (j.v * c + j.d1 * s) - j.v * j.v;
    const double dg = A.r * (2.0 * j.d1 * c + (j.d2 - j.v) * s) - 2.0 * j.v * j.d1;
    return std::pair{g, dg};
  };
  const auto bracket = scan_sign_change([&](double d) { return fdf(d).first; }, 0.0, kPi, opt.scan_cells);
  if (!bracket) throw Error(ErrorCode::NoConvergence, "no tangency found in (0, pi)");
  return A.phi + newton_bracketed(fdf, bracket->first, bracket->second, opt.root);
}

inline MapCase classify_case(double r, double r1, double tol) {
  if (std::abs(r1) <= tol * r) return MapCase::case1;
  return r1 < 0.0 ? MapCase::case2 : MapCase::case3;
}

/// One step of the angular billiard in polar form.
inline AngularStep step_polar(const SupportCurve& curve, const AngularState& A,
                              const AngularOptions& opt = {}) {
  const double phibar = tangent_from_point(curve, A, opt);
  const double delta = phibar - A.phi;
  const Jet j = curve.position(phibar);
  const double den = j.v * std::cos(delta) - j.d1 * std::sin(delta);
  if (std::abs(den) < opt.s_curve_tol)
    throw Error(ErrorCode::SCurveSingularity, "image at infinity (point on the S-curve)");
  const double r2 = j.v * j.v / den;
  const double phi2 = A.phi + 2.0 * delta;

  AngularStep out;
  out.diag.phibar = phibar;
  out.diag.delta = delta;
  out.diag.tangency = j.v * unit(phibar);
  out.diag.map_case = classify_case(j.v, j.d1, opt.case1_tol);
  out.diag.phi2_raw = phi2;
  out.diag.r2_raw = r2;
  if (r2 > 0.0) {
    out.diag.branch = Branch::direct;
    out.next = {normalize_angle(phi2), r2};
  } else {
    out.diag.branch = Branch::antipodal;
    out.next = {normalize_angle(phi2 + kPi), -r2};
  }
  return out;
}

struct GeometricStep {
  PlanePoint image;
  PlanePoint tangency;
};

/// The angular billiard built from the plane construction: find the right
/// tangent point T by bisection on the curve, reflect the line OA in OT and
/// intersect with the tangent at T. Shares no root-finding with step_polar.
inline GeometricStep step_geometric_full(const SupportCurve& curve, PlanePoint A,
                                         const AngularOptions& opt = {}) {
  require_exterior(curve, AngularState::from_point(A), opt);
  auto along = [&](double t) { return cross(curve_point(curve, t) - A, tangent_vector(curve, t)); };
  const int cells = 4 * opt.scan_cells;
  double best = std::nan("");
  for (int k = 0; k < cells; ++k) {
    const double a = kTwoPi * k / cells, b = kTwoPi * (k + 1) / cells;
    const double fa = along(a), fb = along(b);
    if ((fa < 0.0) == (fb < 0.0) && fa != 0.0) continue;
    const double t = bisect(along, a, b, 1e-15);
    if (dot(curve_point(curve, t) - A, tangent_vector(curve, t)) > 0.0) {
      best = t;
      break;
    }
  }
  if (std::isnan(best)) throw Error(ErrorCode::NoConvergence, "no right tangent found");
  const PlanePoint T = curve_point(curve, best);
  const Vec2 tau = tangent_vector(curve, best) / norm(tangent_vector(curve, best));
  const Vec2 u = A / norm(A);
  const Vec2 t = T / norm(T);
  const Vec2 w = 2.0 * dot(u, t) * t - u;
  const double sin_angle = cross(w, tau);
  if (std::abs(sin_angle) < opt.s_curve_tol)
    throw Error(ErrorCode::SCurveSingularity, "reflected line parallel to the tangent");
  return {cross(T, tau) / sin_angle * w, T};
}

inline AngularState step_geometric(const SupportCurve& curve, const AngularState& A,
                                   const AngularOptions& opt = {}) {
  return AngularState::from_point(step_geometric_full(curve, A.point(), opt).image);
}

struct AngularOrbit {
  std::vector<AngularState> states;
  std::vector<StepDiagnostics> diagnostics;
};

/// n steps of step_polar; a failure is re-thrown tagged with its step index.
inline AngularOrbit orbit(const SupportCurve& curve, const AngularState& start, std::size_t n,
                          const AngularOptions& opt = {}) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "orbit needs at least one step");
  AngularOrbit out;
  out.states.reserve(n + 1);
  out.diagnostics.reserve(n);
  out.states.push_back(start);
  for (std::size_t i = 0; i < n; ++i) {
    try {
      const AngularStep s = step_polar(curve, out.states.back(), opt);
      out.states.push_back(s.next);
      out.diagnostics.push_back(s.diag);
    } catch (const Error& e) {
      throw e.at_step(i);
    }
  }
  return out;
}

/// Points A on the tangent line at Gamma(phibar) whose image is at infinity.
/// Only tangents with r' > 0 carry such a point.
inline std::vector<PlanePoint> s_curve_sample(const SupportCurve& curve, const std::vector<double>& phibar) {
  std::vector<PlanePoint> out;
  for (double t : phibar) {
    const Jet j = curve.position(t);
    if (!(j.d1 > 0.0)) continue;
    const double d = std::atan2(j.v, j.d1);
    const double r1 = j.v * j.v / (j.v * std::cos(d) + j.d1 * std::sin(d));
    out.push_back(r1 * unit(t - d));
  }
  return out;
}

/// Fixed points: A on the tangent at Gamma(phibar) with OA orthogonal to OT.
inline std::vector<PlanePoint> p_curve_sample(const SupportCurve& curve, const std::vector<double>& phibar) {
  std::vector<PlanePoint> out;
  for (double t : phibar) {
    const Jet j = curve.position(t);
    if (!(j.d1 > 0.0)) continue;
    out.push_back((j.v * j.v / j.d1) * unit(t - 0.5 * kPi));
  }
  return out;
}

/// S(phi1, phi2) = 2 sin((phi2 - phi1)/2) / r((phi1 + phi2)/2).
inline double generating_function(const SupportCurve& curve, double phi1, double phi2) {
  return 2.0 * std::sin(0.5 * (phi2 - phi1)) / curve.r(0.5 * (phi1 + phi2));
}

/// |det J - 1| for the map (phi, 1/r) -> (phi2, 1/r2), J by central differences.
inline double symplectic_residual(const SupportCurve& curve, const AngularState& A, double h = 1e-6,
                                  const AngularOptions& opt = {}) {
  auto image = [&](double phi, double u) {
    const StepDiagnostics d = step_polar(curve, {phi, 1.0 / u}, opt).diag;
    return std::pair{d.phi2_raw, 1.0 / d.r2_raw};
  };
  const double u = 1.0 / A.r;
  const auto [a1, b1] = image(A.phi + h, u);
  const auto [a0, b0] = image(A.phi - h, u);
  const auto [c1, d1] = image(A.phi, u + h);
  const auto [c0, d0] = image(A.phi, u - h);
  const double j11 = (a1 - a0) / (2 * h), j21 = (b1 - b0) / (2 * h);
  const double j12 = (c1 - c0) / (2 * h), j22 = (d1 - d0) / (2 * h);
  return std::abs(j11 * j22 - j12 * j21 - 1.0);
}

}  // namespace angbill
