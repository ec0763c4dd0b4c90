#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "angbill/angular.hpp"
#include "angbill/error.hpp"
#include "angbill/geometry.hpp"
#include "angbill/normal_form.hpp"
#include "angbill/polynomial.hpp"
#include "angbill/trace.hpp"

namespace angbill {

/// Max over seeds and steps of |G(A_i) - G(A_0)| / (1 + |G(A_0)|).
inline double invariance_residual(const SupportCurve& curve, const std::function<double(PlanePoint)>& G,
                                  std::size_t steps, const std::vector<AngularState>& seeds,
                                  const AngularOptions& opt = {}) {
  double worst = 0.0;
  for (const auto& s : seeds) {
    const double g0 = G(s.point());
    AngularState cur = s;
    for (std::size_t i = 0; i < steps; ++i) {
      try {
        cur = step_polar(curve, cur, opt).next;
      } catch (const Error& e) {
        throw e.at_step(i);
      }
      worst = std::max(worst, std::abs(G(cur.point()) - g0) / (1.0 + std::abs(g0)));
    }
  }
  return worst;
}

/// Factored polynomial integral F1 = f^k g1 of degree 2 p_half, and the
/// derived quantities on the arc where g1 > 0: g = g1^(1/k), F = f g,
/// m = p_half / k.
struct IntegralData {
  BivariatePoly f;
  BivariatePoly g1;
  int k = 1;
  double p_half = 1.0;
  double m = 1.0;

  double g(double x, double y) const { return std::pow(g1(x, y), 1.0 / k); }
  double F(double x, double y) const { return f(x, y) * g(x, y); }

  /// (F_x, F_y).
  Vec2 gradF(double x, double y) const {
    const double fv = f(x, y), g1v = g1(x, y), gv = g(x, y);
    const double scale = (g1v != 0.0) ? gv / (k * g1v) : 0.0;  // d g1^(1/k) = g/(k g1) d g1
    const double gx = scale * g1.dx()(x, y), gy = scale * g1.dy()(x, y);
    return {f.dx()(x, y) * gv + fv * gx, f.dy()(x, y) * gv + fv * gy};
  }
};

/// Validates deg F1 = k deg f + deg g1 = 2 p_half.
inline IntegralData make_integral_data(BivariatePoly f, BivariatePoly g1, int k, double p_half) {
  if (k < 1) throw Error(ErrorCode::InvalidInput, "k must be a positive integer");
  if (!(p_half > 0.0)) throw Error(ErrorCode::InvalidInput, "p must be positive");
  const int q = std::max(0, g1.degree());
  const int deg = k * f.degree() + q;
  if (std::abs(deg - 2.0 * p_half) > 1e-12)
    throw Error(ErrorCode::InvalidInput, "deg F1 = " + std::to_string(deg) + " but 2p = " + std::to_string(2 * p_half));
  return {std::move(f), std::move(g1), k, p_half, p_half / k};
}

/// mu = -(x^2+y^2) eps / (x^2 + y^2 + 2 eps (x F_y - y F_x)).
inline double lemma_mu(PlanePoint q, Vec2 gradF, double eps) {
  const double r2 = norm2(q);
  return -r2 * eps / (r2 + 2.0 * eps * (q.x * gradF.y - q.y * gradF.x));
}

/// Partial sum sum_{k=1..K} (-1)^k (2 (x F_y - y F_x)/(x^2+y^2))^(k-1) eps^k.
inline double lemma_mu_series(PlanePoint q, Vec2 gradF, double eps, int terms = 6) {
  const double w = 2.0 * (q.x * gradF.y - q.y * gradF.x) / norm2(q);
  double sum = 0.0, wk = 1.0, ek = eps, sign = -1.0;
  for (int k = 1; k <= terms; ++k) {
    sum += sign * wk * ek;
    sign = -sign;
    wk *= w;
    ek *= eps;
  }
  return sum;
}

struct E1Sides {
  double lhs = 0.0;  ///< F(x + eps F_y, y - eps F_x) (-mu/eps)^(2m)
  double rhs = 0.0;  ///< F(x + mu F_y, y - mu F_x)
};

inline E1Sides lemma_e1_sides(const IntegralData& data, PlanePoint q, double eps) {
  const Vec2 g = data.gradF(q.x, q.y);
  const double mu = lemma_mu(q, g, eps);
  E1Sides s;
  s.lhs = data.F(q.x + eps * g.y, q.y - eps * g.x) * std::pow(-mu / eps, 2.0 * data.m);
  s.rhs = data.F(q.x + mu * g.y, q.y - mu * g.x);
  return s;
}

/// Relative gap between the two sides of the displaced-point identity.
inline double lemma_e1_residual(const IntegralData& data, PlanePoint q, double eps) {
  const E1Sides s = lemma_e1_sides(data, q, eps);
  return std::abs(s.lhs - s.rhs) / std::max({std::abs(s.lhs), std::abs(s.rhs), 1e-30});
}

/// Absolute gap |LHS - RHS|; its order in eps exposes which Taylor
/// coefficients of the identity vanish on the curve.
inline double lemma_e1_defect(const IntegralData& data, PlanePoint q, double eps) {
  const E1Sides s = lemma_e1_sides(data, q, eps);
  return std::abs(s.lhs - s.rhs);
}

struct ConstancyEstimate {
  double value = 0.0;   ///< mean of the ratio (or its negative, see e4_constancy_check)
  double spread = 0.0;  ///< (max - min) / |mean|
  std::size_t samples = 0;
};

namespace detail {
inline ConstancyEstimate summarize(const std::vector<double>& v) {
  ConstancyEstimate e;
  e.samples = v.size();
  if (v.empty()) return e;
  double s = 0.0;
  for (double x : v) s += x;
  e.value = s / v.size();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  e.spread = (*hi - *lo) / std::abs(e.value);
  return e;
}
}  // namespace detail

/// Constancy of g1^(3/k) H(f) / (x^2+y^2)^(3m-3) along the trace; the mean is
/// the estimate of c1.
inline ConstancyEstimate remarkable_identity(const IntegralData& data, const CurveTrace& trace) {
  const BivariatePoly H = h_operator(data.f);
  std::vector<double> ratio;
  ratio.reserve(trace.size());
  for (const auto& q : trace.points) {
    const double g1v = data.g1(q.x, q.y);
    if (!(g1v > 0.0)) throw Error(ErrorCode::SignViolation, "g1 must be positive on the working arc");
    ratio.push_back(std::pow(g1v, 3.0 / data.k) * H(q.x, q.y) / std::pow(norm2(q), 3.0 * data.m - 3.0));
  }
  return detail::summarize(ratio);
}

/// On {f = 0}, z = 1: g1^6 Hess(f~)^(2k) / (x^2+y^2)^(6p - 6k) should equal -c.
/// Returns value = c (i.e. minus the mean ratio) and the spread of the ratio.
inline ConstancyEstimate e4_constancy_check(const IntegralData& data, const CurveTrace& trace) {
  const HomogeneousPoly3 hess = hessian3(homogenize(data.f));
  std::vector<double> ratio;
  ratio.reserve(trace.size());
  for (const auto& q : trace.points) {
    const double g1v = data.g1(q.x, q.y);
    if (!(g1v > 0.0)) throw Error(ErrorCode::SignViolation, "g1 must be positive on the working arc");
    ratio.push_back(std::pow(g1v, 6.0) * std::pow(hess(q.x, q.y, 1.0), 2.0 * data.k) /
                    std::pow(norm2(q), 6.0 * data.p_half - 6.0 * data.k));
  }
  ConstancyEstimate e = detail::summarize(ratio);
  e.value = -e.value;
  return e;
}

/// Both sides of Hess(f~) = ((d-1)^2/z^2) [ d/(d-1) f~ (f~_xx f~_yy - f~_xy^2) - H(f~) ]
/// at (x, y, z); returns the relative residual.
inline double hessian_relation_residual(const HomogeneousPoly3& F, double x, double y, double z) {
  const int d = F.degree();
  if (d < 2) throw Error(ErrorCode::DegreeTooLow, "relation needs degree >= 2");
  const double lhs = hessian3(F)(x, y, z);
  const HomogeneousPoly3 fx = F.dx(), fy = F.dy();
  const double fxx = fx.dx()(x, y, z), fxy = fx.dy()(x, y, z), fyy = fy.dy()(x, y, z);
  const double h = h_operator(F)(x, y, z);
  const double rhs = ((d - 1.0) * (d - 1.0) / (z * z)) *
                     ((d / (d - 1.0)) * F(x, y, z) * (fxx * fyy - fxy * fxy) - h);
  return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}

struct DegreeLedger {
  int p_half = 0;
  int deg_lhs = 0;  ///< deg g1^6 H(f)^(2k) = 12p - 8k
  int deg_rhs = 0;  ///< deg (x^2+y^2)^(6p-6k) = 12p - 12k
  int z_power = 0;  ///< homogenising factor z^(4k)
};

inline DegreeLedger degree_bookkeeping(int d, int k, int q) {
  if (d < 1 || k < 1 || q < 0) throw Error(ErrorCode::InvalidInput, "need d >= 1, k >= 1, q >= 0");
  if ((k * d + q) % 2 != 0) throw Error(ErrorCode::ParityError, "k d + q must be even");
  DegreeLedger l;
  l.p_half = (k * d + q) / 2;
  l.deg_lhs = 12 * l.p_half - 8 * k;
  l.deg_rhs = 12 * l.p_half - 12 * k;
  l.z_power = 4 * k;
  return l;
}

enum class Verdict { NOT_POLY_INTEGRABLE, INCONCLUSIVE };

inline const char* to_string(Verdict v) {
  return v == Verdict::NOT_POLY_INTEGRABLE ? "NOT_POLY_INTEGRABLE" : "INCONCLUSIVE";
}

struct CertifyOptions {
  FlexOptions flex{};
  double origin_exclusion = 1e-8;  ///< witnesses need x^2 + y^2 above this
  double verify_tol = 1e-8;
};

struct Certificate {
  Verdict verdict = Verdict::INCONCLUSIVE;
  std::vector<ClassifiedPoint> witnesses;
  std::vector<std::string> assumptions;
  CertifyOptions options{};
};

/// Non-integrability test for the billiard inside the dual of {f = 0}.
///
/// Any real singular or inflection point of the curve away from x^2 + y^2 = 0
/// rules out a polynomial integral. Absence of real witnesses proves nothing
/// (complex points are not examined), hence INCONCLUSIVE rather than a
/// positive statement.
inline Certificate certify(const BivariatePoly& f, const CurveTrace& trace, const CertifyOptions& opt = {}) {
  if (f.degree() <= 2) throw Error(ErrorCode::DegreeTooLow, "conics are the integrable case");
  Certificate c;
  c.options = opt;
  c.assumptions = {"f is irreducible over C (asserted by the caller, not checked)",
                   "deg f = " + std::to_string(f.degree()) + " > 2",
                   "only real points on and near the traced oval were examined"};
  const BivariatePoly H = h_operator(f);
  const BivariatePoly fx = f.dx(), fy = f.dy();
  const double cscale = std::max(1.0, f.max_abs_coeff());
  for (const auto& w : find_real_flexes_and_singular(f, trace, opt.flex)) {
    const PlanePoint q = w.point;
    if (!(norm2(q) > opt.origin_exclusion)) continue;
    const bool on_curve = std::abs(f(q.x, q.y)) <= opt.verify_tol * cscale;
    const bool flat = std::abs(H(q.x, q.y)) <= opt.verify_tol * cscale;
    const bool singular = std::hypot(fx(q.x, q.y), fy(q.x, q.y)) <= opt.verify_tol * cscale;
    if (on_curve && (flat || singular)) c.witnesses.push_back(w);
  }
  c.verdict = c.witnesses.empty() ? Verdict::INCONCLUSIVE : Verdict::NOT_POLY_INTEGRABLE;
  return c;
}

namespace detail {

/// Point of the oval with outward normal angle phi (support point), polished by
/// Newton on {f = 0, grad f parallel to n} from the best trace sample.
inline PlanePoint support_point(const BivariatePoly& f, const CurveTrace& trace, double phi) {
  const Vec2 n = unit(phi);
  PlanePoint q = *std::max_element(trace.points.begin(), trace.points.end(),
                                   [&](PlanePoint a, PlanePoint b) { return dot(n, a) < dot(n, b); });
  const BivariatePoly fx = f.dx(), fy = f.dy(), fxx = fx.dx(), fxy = fx.dy(), fyy = fy.dy();
  for (int it = 0; it < 50; ++it) {
    const double F1 = f(q.x, q.y);
    const double gx = fx(q.x, q.y), gy = fy(q.x, q.y);
    const double F2 = gx * n.y - gy * n.x;
    const double a = gx, b = gy;
    const double c = fxx(q.x, q.y) * n.y - fxy(q.x, q.y) * n.x;
    const double d = fxy(q.x, q.y) * n.y - fyy(q.x, q.y) * n.x;
    const double det = a * d - b * c;
    if (det == 0.0) break;
    const Vec2 step{(d * F1 - b * F2) / det, (a * F2 - c * F1) / det};
    q = q - step;
    if (norm(step) < 1e-15) break;
  }
  return q;
}

}  // namespace detail

/// Certificate from a table with two real ovals of the same algebraic curve
/// {f = 0}: each common outer tangent line is dual to a real singular point of
/// the dual curve. `table_trace` must enclose O.
inline Certificate certify_common_tangent(const BivariatePoly& f, const CurveTrace& table_trace,
                                          const CurveTrace& other_trace, int cells = 720,
                                          const CertifyOptions& opt = {}) {
  if (f.degree() <= 2) throw Error(ErrorCode::DegreeTooLow, "conics are the integrable case");
  Certificate c;
  c.options = opt;
  c.assumptions = {"the table oval and the second oval lie on one irreducible curve (asserted)",
                   "each common tangent line is dual to a real node of the dual curve"};
  auto gap = [&](double phi) {
    const Vec2 n = unit(phi);
    return dot(n, detail::support_point(f, table_trace, phi)) - dot(n, detail::support_point(f, other_trace, phi));
  };
  const BivariatePoly fx = f.dx(), fy = f.dy();
  const double cscale = std::max(1.0, f.max_abs_coeff());
  for (int k = 0; k < cells; ++k) {
    const double a = kTwoPi * k / cells, b = kTwoPi * (k + 1) / cells;
    const double ga = gap(a), gb = gap(b);
    if ((ga < 0.0) == (gb < 0.0)) continue;
    const double phi = bisect(gap, a, b, 1e-14);
    const Vec2 n = unit(phi);
    const PlanePoint t1 = detail::support_point(f, table_trace, phi);
    const PlanePoint t2 = detail::support_point(f, other_trace, phi);
    const double h = dot(n, t1);
    if (!(std::abs(h) > 1e-9)) continue;
    bool ok = true;
    for (const PlanePoint t : {t1, t2}) {
      const Vec2 g{fx(t.x, t.y), fy(t.x, t.y)};
      ok = ok && std::abs(f(t.x, t.y)) <= opt.verify_tol * cscale && std::abs(cross(g, n)) <= opt.verify_tol * norm(g);
    }
    ok = ok && std::abs(dot(n, t2) - h) <= opt.verify_tol;
    if (!ok) continue;
    const PlanePoint w = n / h;
    if (norm2(w) > opt.origin_exclusion) c.witnesses.push_back({w, PointKind::singular});
  }
  c.verdict = c.witnesses.empty() ? Verdict::INCONCLUSIVE : Verdict::NOT_POLY_INTEGRABLE;
  return c;
}

}  // namespace angbill
