#pragma once

#include <cmath>
#include <vector>

#include "angbill/curve.hpp"
#include "angbill/error.hpp"
#include "angbill/geometry.hpp"
#include "angbill/polynomial.hpp"
#include "angbill/roots.hpp"

namespace angbill {

/// Convex billiard table gamma described by its supporting function
/// p(psi) = 1/r(psi), where r is the position function of the dual oval Gamma.
/// The boundary point with outward normal angle psi is the envelope point
/// p n + p' n_perp.
class BilliardTable {
 public:
  explicit BilliardTable(SupportCurve dual) : dual_(std::move(dual)) {}

  const SupportCurve& dual() const { return dual_; }
  Jet support(double psi) const { return dual_.support(psi); }

  PlanePoint point(double psi) const {
    const Jet p = support(psi);
    return p.v * unit(psi) + p.d1 * perp(unit(psi));
  }
  Vec2 normal(double psi) const { return unit(psi); }
  /// Unit tangent, counterclockwise orientation.
  Vec2 tangent(double psi) const { return perp(unit(psi)); }
  /// Curvature radius p + p''.
  double curvature_radius(double psi) const {
    const Jet p = support(psi);
    return p.v + p.d2;
  }

 private:
  SupportCurve dual_;
};

struct BilliardLineState {
  OrientedLine line;
  PlanePoint last_hit{};
  bool has_hit = false;
};

struct BirkhoffOptions {
  RootOptions root{};
  double tangential_tol = 1e-8;
};

/// Normal angle of the boundary point where the oriented line leaves the table.
///
/// With u = psi - phi the chord condition <n_L, gamma(psi)> = d reads
/// p(psi) cos u - p'(psi) sin u = d, strictly decreasing in u on (0, pi), so the
/// exit point is bracketed without scanning.
inline double exit_angle(const BilliardTable& table, const OrientedLine& line,
                         const BirkhoffOptions& opt = {}) {
  const double phi = line.phi, d = line.p;
  auto fdf = [&](double u) {
    const Jet p = table.support(phi + u);
    const double c = std::cos(u), s = std::sin(u);
    return std::pair{p.v * c - p.d1 * s - d, -(p.v + p.d2) * s};
  };
  if (!(fdf(0.0).first > 0.0) || !(fdf(kPi).first < 0.0))
    throw Error(ErrorCode::NoIntersection, "line misses the table");
  return phi + newton_bracketed(fdf, 0.0, kPi, opt.root);
}

/// Advance to the next boundary hit and reflect: v+ = v- - 2 n <v-, n>.
inline BilliardLineState reflect(const BilliardTable& table, const BilliardLineState& state,
                                 const BirkhoffOptions& opt = {}) {
  const OrientedLine& l = state.line;
  const double psi = exit_angle(table, l, opt);
  const double sin_incidence = std::sin(psi - l.phi);
  if (std::abs(sin_incidence) < opt.tangential_tol)
    throw Error(ErrorCode::TangentialChord, "line is tangent to the table");
  const PlanePoint q = table.point(psi);
  // Reflecting the direction angle phi + pi/2 in the tangent angle psi + pi/2.
  const double phi_out = 2.0 * psi - l.phi;
  return {OrientedLine(phi_out, dot(unit(phi_out), q)), q, true};
}

/// Inverse map: reverse, reflect, reverse.
inline BilliardLineState reflect_inverse(const BilliardTable& table, const BilliardLineState& state,
                                         const BirkhoffOptions& opt = {}) {
  BilliardLineState back = reflect(table, {state.line.reversed()}, opt);
  back.line = back.line.reversed();
  return back;
}

inline std::vector<BilliardLineState> birkhoff_orbit(const BilliardTable& table, const OrientedLine& start,
                                                     std::size_t n, const BirkhoffOptions& opt = {}) {
  std::vector<BilliardLineState> out;
  out.reserve(n + 1);
  out.push_back({start});
  for (std::size_t i = 0; i < n; ++i) {
    try {
      out.push_back(reflect(table, out.back(), opt));
    } catch (const Error& e) {
      throw e.at_step(i);
    }
  }
  return out;
}

/// Homogeneous polynomial Phi(sigma, v_x, v_y) of even degree, stored as a
/// HomogeneousPoly3 in the variable order (sigma, v_x, v_y).
class IntegralPoly {
 public:
  explicit IntegralPoly(HomogeneousPoly3 phi) : phi_(std::move(phi)) {
    if (phi_.degree() < 0 || phi_.degree() % 2 != 0)
      throw Error(ErrorCode::OddDegree, "integral must have even degree");
  }

  int degree() const { return phi_.degree(); }
  const HomogeneousPoly3& poly() const { return phi_; }
  double operator()(double sigma, double vx, double vy) const { return phi_(sigma, vx, vy); }

 private:
  HomogeneousPoly3 phi_;
};

/// Phi on the unit velocity along a line: sigma = p, v = (-sin phi, cos phi).
inline double eval_integral(const IntegralPoly& phi, const OrientedLine& line) {
  return phi(line.p, -std::sin(line.phi), std::cos(line.phi));
}

/// Monomial c * sigma^a v_x^b v_y^c of a raw (mixed-degree) integral.
struct Term3 {
  int sigma = 0;
  int vx = 0;
  int vy = 0;
  double c = 0.0;
  int degree() const { return sigma + vx + vy; }
};

/// Homogenise to degree n by multiplying each monomial of degree n - 2j by
/// (v_x^2 + v_y^2)^j.
inline IntegralPoly homogenize_integral(const std::vector<Term3>& raw, int n) {
  if (n < 0 || n % 2 != 0) throw Error(ErrorCode::ParityMismatch, "target degree must be even");
  HomogeneousPoly3 out(n);
  for (const auto& t : raw) {
    if (t.sigma < 0 || t.vx < 0 || t.vy < 0) throw Error(ErrorCode::InvalidInput, "negative exponent");
    const int m = t.degree();
    if (m > n || (n - m) % 2 != 0)
      throw Error(ErrorCode::ParityMismatch, "monomial degree " + std::to_string(m) +
                                                 " incompatible with target degree " + std::to_string(n));
    const int j = (n - m) / 2;
    // (v_x^2 + v_y^2)^j = sum_k C(j,k) v_x^{2k} v_y^{2(j-k)}
    double binom = 1.0;
    for (int k = 0; k <= j; ++k) {
      out.add(t.sigma, t.vx + 2 * k, t.c * binom);
      binom = binom * (j - k) / (k + 1);
    }
  }
  return IntegralPoly(out);
}

/// Phi - c |v|^n.
inline IntegralPoly subtract_energy_power(const IntegralPoly& phi, double c) {
  const std::vector<Term3> energy{{0, 0, 0, -c}};
  const IntegralPoly shift = homogenize_integral(energy, phi.degree());
  return IntegralPoly(phi.poly() + shift.poly());
}

/// Phi(q, tau(q)) at each boundary sample, with tau the positive unit tangent.
inline std::vector<double> tangential_samples(const IntegralPoly& phi, const BilliardTable& table, int grid) {
  std::vector<double> out;
  out.reserve(grid);
  for (int k = 0; k < grid; ++k) {
    const double psi = kTwoPi * k / grid;
    const PlanePoint q = table.point(psi);
    const Vec2 tau = table.tangent(psi);
    out.push_back(phi(momentum(q, tau), tau.x, tau.y));
  }
  return out;
}

/// max |Phi(q, tau(q))| over the boundary grid.
inline double tangential_values(const IntegralPoly& phi, const BilliardTable& table, int grid = 1024) {
  double m = 0.0;
  for (double v : tangential_samples(phi, table, grid)) m = std::max(m, std::abs(v));
  return m;
}

/// Mean of Phi(q, tau(q)); the constant c such that Phi - c|v|^n vanishes on tangents.
inline double tangential_constant(const IntegralPoly& phi, const BilliardTable& table, int grid = 1024) {
  double s = 0.0;
  for (double v : tangential_samples(phi, table, grid)) s += v;
  return s / grid;
}

}  // namespace angbill
