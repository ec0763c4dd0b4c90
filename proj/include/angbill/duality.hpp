#pragma once

#include <cmath>
#include <vector>

#include "angbill/angular.hpp"
#include "angbill/birkhoff.hpp"
#include "angbill/curve.hpp"
#include "angbill/geometry.hpp"
#include "angbill/polynomial.hpp"

namespace angbill {

/// Table gamma whose tangent lines are the polars of the points of Gamma.
inline BilliardTable table_from_dual(const SupportCurve& Gamma) { return BilliardTable(Gamma); }

/// Poles of the tangent lines of gamma, built from boundary points and
/// tangents of the table (not from the position function of Gamma).
inline std::vector<PlanePoint> dual_curve_samples(const BilliardTable& table, int grid) {
  std::vector<PlanePoint> out;
  out.reserve(grid);
  for (int k = 0; k < grid; ++k) {
    const double psi = kTwoPi * k / grid;
    out.push_back(dual_of_line(OrientedLine::through(table.point(psi), table.tangent(psi))));
  }
  return out;
}

/// Poles of the tangent lines of Gamma itself: samples of gamma.
inline std::vector<PlanePoint> dual_of_curve_samples(const SupportCurve& Gamma, int grid) {
  std::vector<PlanePoint> out;
  out.reserve(grid);
  for (int k = 0; k < grid; ++k) {
    const double phi = kTwoPi * k / grid;
    out.push_back(dual_of_line(OrientedLine::through(curve_point(Gamma, phi), tangent_vector(Gamma, phi))));
  }
  return out;
}

/// Angle between a line and the table tangent at the next hit.
inline double incidence_angle(const BilliardTable& table, const OrientedLine& line) {
  const double psi = exit_angle(table, line);
  return std::abs(std::asin(std::sin(psi - line.phi)));
}

struct DualPoint {
  PlanePoint point;
  /// +1 if the source line is positive (A(L_i) = L_{i+1}), -1 otherwise (A(L_i) = L_{i-1}).
  int sign = 1;
};

inline std::vector<DualPoint> dualize_orbit(const std::vector<BilliardLineState>& orbit,
                                            const DualityOptions& opt = {}) {
  std::vector<DualPoint> out;
  out.reserve(orbit.size());
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    try {
      out.push_back({dual_of_line(orbit[i].line, opt), orbit[i].line.p > 0.0 ? 1 : -1});
    } catch (const Error& e) {
      throw e.at_step(i);
    }
  }
  return out;
}

/// Maximum distance between the angular image of each dual point and the dual
/// point the orbit correspondence predicts for it.
inline double dual_orbit_deviation(const SupportCurve& Gamma, const std::vector<BilliardLineState>& orbit,
                                   const AngularOptions& opt = {}) {
  const std::vector<DualPoint> pts = dualize_orbit(orbit);
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::size_t target;
    if (pts[i].sign > 0) {
      if (i + 1 >= pts.size()) continue;
      target = i + 1;
    } else {
      if (i == 0) continue;
      target = i - 1;
    }
    const AngularState img = step_polar(Gamma, AngularState::from_point(pts[i].point), opt).next;
    worst = std::max(worst, distance(img.point(), pts[target].point));
  }
  return worst;
}

struct TangencyRuleCheck {
  bool tangency_between = false;  ///< T in [A; B]
  bool keeps_orientation = false; ///< C(a) = b (otherwise C(a) = -b)
  double mismatch = 0.0;          ///< distance in (phi, p) to the predicted line
};

/// For A -> B = A(A), compare the billiard image of the positive polar line of
/// A with the positive polar line of B, or its reversal.
inline TangencyRuleCheck tangency_rule(const SupportCurve& Gamma, PlanePoint A, double band = 1e-10,
                                       const AngularOptions& opt = {}) {
  const AngularStep st = step_polar(Gamma, AngularState::from_point(A), opt);
  const PlanePoint B = st.next.point();
  const PlanePoint T = st.diag.tangency;
  const double t = dot(T - A, B - A) / norm2(B - A);
  TangencyRuleCheck out;
  out.tangency_between = t >= -band && t <= 1.0 + band;
  const OrientedLine a = dual_of_point(A), b = dual_of_point(B);
  const OrientedLine img = reflect(table_from_dual(Gamma), {a}).line;
  const OrientedLine expect = out.tangency_between ? b : b.reversed();
  auto gap = [](const OrientedLine& x, const OrientedLine& y) {
    return std::hypot(angle_diff(x.phi, y.phi), x.p - y.p);
  };
  out.mismatch = gap(img, expect);
  out.keeps_orientation = gap(img, b) < gap(img, b.reversed());
  return out;
}

/// Rational integral G = F / (x^2 + y^2)^(n/2) of the angular billiard with
/// F(x, y) = Phi(1, -y, x).
struct DualIntegral {
  BivariatePoly F;
  int n = 0;
  double operator()(double x, double y) const { return F(x, y) / std::pow(x * x + y * y, 0.5 * n); }
  double operator()(PlanePoint q) const { return (*this)(q.x, q.y); }
};

inline DualIntegral dualize_integral(const IntegralPoly& phi) {
  const HomogeneousPoly3& P = phi.poly();
  const int n = P.degree();
  if (n % 2 != 0) throw Error(ErrorCode::OddDegree, "integral must have even degree");
  DualIntegral out;
  out.n = n;
  for (int a = 0; a <= n; ++a)
    for (int b = 0; a + b <= n; ++b) {
      const double c = P.coeff(a, b);
      if (c == 0.0) continue;
      const int e = n - a - b;  // exponent of v_y -> x
      out.F.add_term(e, b, (b % 2 == 0) ? c : -c);
    }
  return out;
}

}  // namespace angbill
