#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "angbill/error.hpp"
#include "angbill/geometry.hpp"
#include "angbill/jet.hpp"
#include "angbill/polynomial.hpp"
#include "angbill/roots.hpp"

namespace angbill {

struct CurveValidation {
  int grid = 4096;
  /// Accept zero curvature (flat points such as those of the Fermat oval).
  bool allow_flat = false;
  double periodicity_tol = 1e-12;
  double flat_tol = 1e-9;
};

/// Star-shaped smooth oval Gamma given by its polar position function r(phi)
/// about O. The reciprocal p = 1/r is the supporting function of the dual
/// table gamma.
///
/// Curves carry exact derivatives through a Jet-valued evaluator; whether the
/// third derivative is meaningful is recorded separately because curves built
/// from user-supplied (r, r', r'') functions do not have it.
class SupportCurve {
 public:
  using JetFn = std::function<Jet(double)>;

  SupportCurve(std::string name, JetFn r_jet, bool has_third = true,
               const CurveValidation& validation = {}, PlanePoint origin = {})
      : name_(std::move(name)),
        r_jet_(std::make_shared<JetFn>(std::move(r_jet))),
        has_third_(has_third),
        origin_(origin) {
    validate(validation);
  }

  /// From three separate functions r, r', r''; the third derivative is absent.
  static SupportCurve from_functions(std::string name, std::function<double(double)> r,
                                     std::function<double(double)> r1,
                                     std::function<double(double)> r2,
                                     const CurveValidation& validation = {}) {
    JetFn jf = [r = std::move(r), r1 = std::move(r1), r2 = std::move(r2)](double phi) {
      return Jet{r(phi), r1(phi), r2(phi), std::nan("")};
    };
    return SupportCurve(std::move(name), std::move(jf), false, validation);
  }

  const std::string& name() const { return name_; }
  bool has_third_derivative() const { return has_third_; }
  /// Plane coordinates of O (for display only; all computation is O-centred).
  PlanePoint origin() const { return origin_; }

  Jet position(double phi) const { return (*r_jet_)(phi); }
  Jet support(double phi) const { return reciprocal(position(phi)); }

  double r(double phi) const { return position(phi).v; }
  double r1(double phi) const { return position(phi).d1; }
  double r2(double phi) const { return position(phi).d2; }

  /// r^2 + 2 r'^2 - r r'' (positive iff Gamma is strictly convex at phi).
  double convexity(double phi) const {
    const Jet j = position(phi);
    return j.v * j.v + 2.0 * j.d1 * j.d1 - j.v * j.d2;
  }

  /// Curvature radius of the dual table: (p'' + p) / 2.
  double half_curvature_radius(double phi) const {
    const Jet p = support(phi);
    return 0.5 * (p.d2 + p.v);
  }

 private:
  void validate(const CurveValidation& v) const {
    const double r0 = r(0.0), rp = r(kTwoPi);
    if (!(std::abs(r0 - rp) <= v.periodicity_tol * std::max(1.0, r0)))
      throw Error(ErrorCode::NonConvex, name_ + ": r is not 2pi-periodic");
    for (int k = 0; k < v.grid; ++k) {
      const double phi = kTwoPi * k / v.grid;
      const Jet j = position(phi);
      if (!(j.v > 0.0) || !std::isfinite(j.v))
        throw Error(ErrorCode::NonConvex, name_ + ": r must be positive (O inside the curve)");
      const double scale = j.v * j.v;
      const double conv = convexity(phi);
      const double a = half_curvature_radius(phi);
      const double floor = v.allow_flat ? -v.flat_tol : 0.0;
      if (!(conv > floor * scale) || !(a > floor / j.v))
        throw Error(ErrorCode::NonConvex,
                    name_ + ": convexity fails at phi=" + std::to_string(phi));
    }
  }

  std::string name_;
  std::shared_ptr<const JetFn> r_jet_;
  bool has_third_;
  PlanePoint origin_;
};

/// Gamma(phi) = r(phi) (cos phi, sin phi).
inline PlanePoint curve_point(const SupportCurve& c, double phi) { return c.r(phi) * unit(phi); }

/// dGamma/dphi = (r' + i r) e^{i phi}.
inline Vec2 tangent_vector(const SupportCurve& c, double phi) {
  const Jet j = c.position(phi);
  const double cs = std::cos(phi), sn = std::sin(phi);
  return {j.d1 * cs - j.v * sn, j.d1 * sn + j.v * cs};
}

inline SupportCurve make_ellipse(double a, double b, const CurveValidation& v = {}) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::InvalidAxes, "ellipse axes must be positive");
  const double ia = 1.0 / (a * a), ib = 1.0 / (b * b);
  auto jf = [ia, ib](double phi) {
    const Jet t = Jet::variable(phi);
    const Jet c = cos(t), s = sin(t);
    return reciprocal(sqrt(ia * c * c + ib * s * s));
  };
  return SupportCurve("ellipse(" + std::to_string(a) + "," + std::to_string(b) + ")", jf, true, v);
}

/// Circle of radius R seen from O = (x0, 0) in the circle's frame.
inline SupportCurve make_offset_circle(double R, double x0, const CurveValidation& v = {}) {
  if (!(R > 0.0) || !(std::abs(x0) < R))
    throw Error(ErrorCode::CenterOutside, "O must lie strictly inside the circle");
  auto jf = [R, x0](double phi) {
    const Jet t = Jet::variable(phi);
    const Jet c = cos(t), s = sin(t);
    return -x0 * c + sqrt(R * R - x0 * x0 * s * s);
  };
  return SupportCurve("offset_circle(" + std::to_string(R) + "," + std::to_string(x0) + ")", jf,
                      true, v, PlanePoint{x0, 0.0});
}

/// Supporting function p(phi) = c0 + sum_k (a_k cos k phi + b_k sin k phi),
/// k starting at 1; Gamma has r = 1/p.
inline SupportCurve make_trig_poly(double c0, std::vector<double> cos_coeffs,
                                   std::vector<double> sin_coeffs, const CurveValidation& v = {}) {
  auto jf = [c0, cc = std::move(cos_coeffs), ss = std::move(sin_coeffs)](double phi) {
    Jet p(c0);
    for (std::size_t k = 0; k < cc.size(); ++k) {
      const Jet t = (static_cast<double>(k + 1)) * Jet::variable(phi);
      p += cc[k] * cos(t);
    }
    for (std::size_t k = 0; k < ss.size(); ++k) {
      const Jet t = (static_cast<double>(k + 1)) * Jet::variable(phi);
      p += ss[k] * sin(t);
    }
    return reciprocal(p);
  };
  return SupportCurve("trig_poly", jf, true, v);
}

/// Real algebraic curve {f = 0} with a point on it, for tracing.
struct ImplicitCurveModel {
  BivariatePoly poly;
  PlanePoint seed;
  bool counterclockwise = true;

  ImplicitCurveModel(BivariatePoly f, PlanePoint s, bool ccw = true)
      : poly(std::move(f)), seed(s), counterclockwise(ccw) {
    const double val = poly(seed.x, seed.y);
    if (!(std::abs(val) < 1e-10))
      throw Error(ErrorCode::InvalidInput, "seed is not on the curve (|f| = " + std::to_string(val) + ")");
    const double gx = poly.dx()(seed.x, seed.y), gy = poly.dy()(seed.x, seed.y);
    if (!(std::hypot(gx, gy) > 1e-8)) throw Error(ErrorCode::SingularEncountered, "gradient vanishes at seed");
  }
};

/// Radius of the first zero of f along the ray at angle phi from O.
inline double radial_root(const BivariatePoly& f, double phi, double r_max = 1e6) {
  const double c = std::cos(phi), s = std::sin(phi);
  const BivariatePoly fx = f.dx(), fy = f.dy();
  auto fdf = [&](double r) {
    return std::pair{f(r * c, r * s), fx(r * c, r * s) * c + fy(r * c, r * s) * s};
  };
  const double f0 = f(0.0, 0.0);
  if (f0 == 0.0) throw Error(ErrorCode::InvalidInput, "O lies on the curve");
  double lo = 0.0, hi = 1e-3;
  while ((fdf(hi).first > 0.0) == (f0 > 0.0)) {
    lo = hi;
    hi *= 1.25;
    if (hi > r_max) throw Error(ErrorCode::NonConvex, "ray from O does not meet the curve");
  }
  return newton_bracketed(fdf, lo, hi);
}

/// Seed point of {f = 0} on the positive x axis.
inline PlanePoint radial_seed(const BivariatePoly& f) { return {radial_root(f, 0.0), 0.0}; }

/// Polar position function of the oval {f = 0} about O (O inside, oval
/// star-shaped). Derivatives are exact: Newton's iteration is replayed on jets,
/// each pass doubling the number of correct Taylor orders.
inline SupportCurve make_implicit_support(const BivariatePoly& f, const CurveValidation& v = {},
                                          std::string name = "implicit") {
  auto fx = f.dx(), fy = f.dy();
  auto jf = [f, fx, fy](double phi) {
    const double r0 = radial_root(f, phi);
    const Jet t = Jet::variable(phi);
    const Jet c = cos(t), s = sin(t);
    Jet r(r0);
    for (int pass = 0; pass < 3; ++pass) {
      const Jet x = r * c, y = r * s;
      const Jet h = f.eval(x, y);
      const Jet hr = fx.eval(x, y) * c + fy.eval(x, y) * s;
      r = r - h / hr;
      r.v = r0;
    }
    return r;
  };
  return SupportCurve(std::move(name), jf, true, v);
}

}  // namespace angbill
