#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "angbill/curve.hpp"
#include "angbill/error.hpp"
#include "angbill/geometry.hpp"
#include "angbill/polynomial.hpp"

namespace angbill {

struct TraceOptions {
  std::size_t max_points = 400000;
  double f_tol = 1e-10;
  double grad_min = 1e-8;
  int newton_iter = 60;
};

/// Ordered samples of a branch of {f = 0} with cumulative chord length.
struct CurveTrace {
  std::vector<PlanePoint> points;
  std::vector<double> arc;
  bool closed = false;
  double step = 0.0;

  std::size_t size() const { return points.size(); }
  double length() const {
    if (points.empty()) return 0.0;
    return arc.back() + (closed ? distance(points.back(), points.front()) : 0.0);
  }
  /// Number of segments: closed traces wrap from the last point to the first.
  std::size_t segments() const {
    if (points.size() < 2) return 0;
    return closed ? points.size() : points.size() - 1;
  }
  PlanePoint segment_end(std::size_t i) const { return points[(i + 1) % points.size()]; }

  static CurveTrace from_points(std::vector<PlanePoint> pts, bool closed) {
    CurveTrace t;
    t.points = std::move(pts);
    t.closed = closed;
    t.arc.reserve(t.points.size());
    double s = 0.0;
    for (std::size_t i = 0; i < t.points.size(); ++i) {
      if (i > 0) {
        const double d = distance(t.points[i - 1], t.points[i]);
        s += d;
        t.step = std::max(t.step, d);
      }
      t.arc.push_back(s);
    }
    return t;
  }
};

namespace detail {

struct Gradient {
  BivariatePoly fx, fy;
  explicit Gradient(const BivariatePoly& f) : fx(f.dx()), fy(f.dy()) {}
  Vec2 operator()(PlanePoint p) const { return {fx(p.x, p.y), fy(p.x, p.y)}; }
};

/// Newton projection onto {f = 0} along the gradient.
inline PlanePoint project_to_curve(const BivariatePoly& f, const Gradient& grad, PlanePoint q,
                                   const TraceOptions& opt) {
  for (int it = 0; it < opt.newton_iter; ++it) {
    const double v = f(q.x, q.y);
    const Vec2 g = grad(q);
    const double g2 = norm2(g);
    if (!(std::sqrt(g2) >= opt.grad_min))
      throw Error(ErrorCode::SingularEncountered,
                  "gradient vanishes near (" + std::to_string(q.x) + ", " + std::to_string(q.y) + ")");
    if (std::abs(v) < opt.f_tol) return q;
    q = q - (v / g2) * g;
  }
  if (std::abs(f(q.x, q.y)) < opt.f_tol) return q;
  throw Error(ErrorCode::NoConvergence, "corrector did not reach |f| < tolerance");
}

}  // namespace detail

/// Predictor-corrector trace of the branch through model.seed.
///
/// Euler predictor along the unit tangent (oriented counterclockwise around the
/// region {f < 0} when the model asks for it), Newton corrector along the
/// gradient. Stops when the trace returns within one step of the seed.
inline CurveTrace trace_curve(const ImplicitCurveModel& model, double step,
                              const TraceOptions& opt = {}) {
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidInput, "step must be positive");
  const BivariatePoly& f = model.poly;
  const detail::Gradient grad(f);
  const double orient = model.counterclockwise ? 1.0 : -1.0;

  CurveTrace out;
  out.step = step;
  PlanePoint cur = detail::project_to_curve(f, grad, model.seed, opt);
  out.points.push_back(cur);
  out.arc.push_back(0.0);

  Vec2 prev_dir{0.0, 0.0};
  while (true) {
    if (out.points.size() >= opt.max_points)
      throw Error(ErrorCode::BudgetExceeded, "trace did not close within the point budget");
    const Vec2 g = grad(cur);
    const double gn = norm(g);
    if (!(gn >= opt.grad_min)) throw Error(ErrorCode::SingularEncountered, "gradient vanishes on the trace");
    Vec2 dir = orient * perp(g) / gn;
    if (out.points.size() > 1 && dot(dir, prev_dir) < 0.0) dir = -dir;
    prev_dir = dir;

    const PlanePoint next = detail::project_to_curve(f, grad, cur + step * dir, opt);
    const double s = out.arc.back() + distance(cur, next);
    if (s > 3.0 * step && distance(next, out.points.front()) < step) {
      const double to_seed = distance(next, out.points.front());
      // Keep `next` unless it would sit on top of the seed.
      if (to_seed > 0.5 * step) {
        out.points.push_back(next);
        out.arc.push_back(s);
      }
      out.closed = true;
      break;
    }
    out.points.push_back(next);
    out.arc.push_back(s);
    cur = next;
  }
  return out;
}

enum class PointKind { inflection, singular };

inline const char* to_string(PointKind k) { return k == PointKind::inflection ? "inflection" : "singular"; }

struct ClassifiedPoint {
  PlanePoint point;
  PointKind kind;
};

struct FlexOptions {
  double bisect_tol = 1e-10;
  /// Accept an extremum of H as a flex when |H| <= h_tol * max(1, max |H| on trace).
  double h_tol = 1e-8;
  int singular_grid = 64;
  double bbox_inflate = 0.25;
  double cluster_radius = 1e-6;
  double grad_tol = 1e-8;
  double f_tol = 1e-10;
};

namespace detail {

/// Bisection for a sign change of `g` along the segment [a, b] of a trace,
/// each probe projected back onto the curve.
template <class G>
PlanePoint refine_on_curve(const BivariatePoly& f, const Gradient& grad, PlanePoint a, PlanePoint b,
                           G&& g, double tol) {
  const TraceOptions topt;
  auto at = [&](double t) { return project_to_curve(f, grad, a + t * (b - a), topt); };
  double lo = 0.0, hi = 1.0;
  const double glo = g(at(lo));
  const double len = std::max(distance(a, b), 1e-300);
  while ((hi - lo) * len > tol) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(at(mid));
    if (gm == 0.0) return at(mid);
    if ((gm < 0.0) == (glo < 0.0)) lo = mid; else hi = mid;
  }
  return at(0.5 * (lo + hi));
}

inline void push_clustered(std::vector<ClassifiedPoint>& out, ClassifiedPoint c, double radius) {
  for (const auto& e : out)
    if (e.kind == c.kind && distance(e.point, c.point) < radius) return;
  out.push_back(c);
}

}  // namespace detail

/// Real inflection points of the traced branch and real singular points of
/// {f = 0} near it.
///
/// Inflections are zeros of H(f) along the trace: odd-order zeros show up as
/// sign changes of H, even-order ones (undulation points such as the flat
/// points of x^4 + y^4 = 1) as sign changes of the tangential derivative of H
/// at which H itself vanishes. Singular points are Newton solutions of
/// grad f = 0 on a grid of seeds that also satisfy f = 0.
inline std::vector<ClassifiedPoint> find_real_flexes_and_singular(const BivariatePoly& f,
                                                                 const CurveTrace& trace,
                                                                 const FlexOptions& opt = {}) {
  std::vector<ClassifiedPoint> out;
  if (trace.size() < 2 || f.degree() < 2) return out;
  const detail::Gradient grad(f);
  const BivariatePoly H = h_operator(f);
  const BivariatePoly D = H.dx() * grad.fy - H.dy() * grad.fx;
  auto Hv = [&](PlanePoint p) { return H(p.x, p.y); };
  auto Dv = [&](PlanePoint p) { return D(p.x, p.y); };

  const std::size_t n = trace.size();
  std::vector<double> hv(n), dv(n);
  double hscale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    hv[i] = Hv(trace.points[i]);
    dv[i] = Dv(trace.points[i]);
    hscale = std::max(hscale, std::abs(hv[i]));
  }
  const double accept = opt.h_tol * std::max(1.0, hscale);

  // Candidates whose refinement runs into a singular point are left to the
  // singular-point search below.
  auto refine = [&](PlanePoint a, PlanePoint b, auto&& g) -> std::optional<PlanePoint> {
    try {
      return detail::refine_on_curve(f, grad, a, b, g, opt.bisect_tol);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SingularEncountered || e.code() == ErrorCode::NoConvergence) return std::nullopt;
      throw;
    }
  };
  for (std::size_t i = 0; i < trace.segments(); ++i) {
    const std::size_t j = (i + 1) % n;
    const PlanePoint a = trace.points[i], b = trace.points[j];
    if ((hv[i] < 0.0) != (hv[j] < 0.0)) {
      const auto q = refine(a, b, Hv);
      if (q && std::abs(Hv(*q)) <= accept)
        detail::push_clustered(out, {*q, PointKind::inflection}, opt.cluster_radius);
    }
    if ((dv[i] < 0.0) != (dv[j] < 0.0) &&
        std::min(std::abs(hv[i]), std::abs(hv[j])) <= 0.1 * hscale) {
      const auto q = refine(a, b, Dv);
      if (q && std::abs(Hv(*q)) <= accept)
        detail::push_clustered(out, {*q, PointKind::inflection}, opt.cluster_radius);
    }
  }

  // Singular points.
  double xmin = trace.points[0].x, xmax = xmin, ymin = trace.points[0].y, ymax = ymin;
  for (const auto& p : trace.points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double wx = xmax - xmin, wy = ymax - ymin;
  xmin -= opt.bbox_inflate * wx;
  xmax += opt.bbox_inflate * wx;
  ymin -= opt.bbox_inflate * wy;
  ymax += opt.bbox_inflate * wy;
  const BivariatePoly fxx = grad.fx.dx(), fxy = grad.fx.dy(), fyy = grad.fy.dy();
  const double cscale = std::max(1.0, f.max_abs_coeff());
  const int g = opt.singular_grid;
  for (int ix = 0; ix < g; ++ix)
    for (int iy = 0; iy < g; ++iy) {
      PlanePoint q{xmin + (xmax - xmin) * (ix + 0.5) / g, ymin + (ymax - ymin) * (iy + 0.5) / g};
      bool ok = false;
      for (int it = 0; it < 100; ++it) {
        const double gx = grad.fx(q.x, q.y), gy = grad.fy(q.x, q.y);
        const double a = fxx(q.x, q.y), b = fxy(q.x, q.y), c = fyy(q.x, q.y);
        const double det = a * c - b * b;
        if (det == 0.0 || !std::isfinite(det)) break;
        const Vec2 dq{(c * gx - b * gy) / det, (a * gy - b * gx) / det};
        q = q - dq;
        if (!std::isfinite(q.x) || !std::isfinite(q.y)) break;
        if (norm(dq) < 1e-14 * std::max(1.0, norm(q))) {
          ok = true;
          break;
        }
      }
      if (!ok) {
        // Degenerate critical points converge only linearly; judge by residual.
        ok = std::isfinite(q.x) && std::isfinite(q.y);
      }
      if (!ok) continue;
      if (norm(grad(q)) <= opt.grad_tol * cscale && std::abs(f(q.x, q.y)) <= opt.f_tol * cscale)
        detail::push_clustered(out, {q, PointKind::singular}, opt.cluster_radius);
    }
  return out;
}

}  // namespace angbill
