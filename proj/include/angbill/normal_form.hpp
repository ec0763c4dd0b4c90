#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "angbill/angular.hpp"
#include "angbill/curve.hpp"
#include "angbill/roots.hpp"

namespace angbill {

/// A = (p'' + p) / 2, half the curvature radius of the dual table.
inline double coeff_A(const SupportCurve& curve, double phi) { return curve.half_curvature_radius(phi); }

/// B = (2/3) A'. Exact when the curve has a third derivative, otherwise a
/// five-point difference of A with step 1e-4.
inline double coeff_B(const SupportCurve& curve, double phi) {
  if (curve.has_third_derivative()) {
    const Jet p = curve.support(phi);
    return (p.d3 + p.d1) / 3.0;
  }
  const double h = 1e-4;
  const double dA = (coeff_A(curve, phi - 2 * h) - 8 * coeff_A(curve, phi - h) + 8 * coeff_A(curve, phi + h) -
                     coeff_A(curve, phi + 2 * h)) / (12 * h);
  return 2.0 * dA / 3.0;
}

/// z(delta) = p(phi) - p(phi + delta) cos delta + p'(phi + delta) sin delta.
inline double z_of_delta(const SupportCurve& curve, double phi, double delta) {
  const Jet q = curve.support(phi + delta);
  return curve.support(phi).v - q.v * std::cos(delta) + q.d1 * std::sin(delta);
}

inline double z_expansion_residual(const SupportCurve& curve, double phi, double delta) {
  if (delta == 0.0) return 0.0;
  const double A = coeff_A(curve, phi), B = coeff_B(curve, phi);
  return std::abs(z_of_delta(curve, phi, delta) - A * delta * delta - B * delta * delta * delta);
}

/// Least-squares slope of log(value) against log(step).
inline double loglog_slope(const std::vector<double>& steps, const std::vector<double>& values) {
  const std::size_t n = steps.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(steps[i]), y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline const std::vector<double>& default_delta_ladder() {
  static const std::vector<double> ladder{0.1, 0.05, 0.025, 0.0125};
  return ladder;
}

inline double z_expansion_slope(const SupportCurve& curve, double phi,
                                const std::vector<double>& ladder = default_delta_ladder()) {
  std::vector<double> res;
  for (double d : ladder) res.push_back(z_expansion_residual(curve, phi, d));
  return loglog_slope(ladder, res);
}

struct LazutkinStep {
  double delta = 0.0;
  double phi_next = 0.0;
  double v_next = 0.0;
  double residual1 = 0.0;  ///< |phi' - phi - 2v/sqrt(A)|
  double residual2 = 0.0;  ///< |v' - v - B v^2 / (2 A^{3/2})|
};

/// Solve z(delta) = v^2 for delta (z is increasing in delta on (0, pi)),
/// advance with the implicit step and compare against the normal form.
inline LazutkinStep lazutkin_step_check(const SupportCurve& curve, double phi, double v,
                                        const RootOptions& root = {}) {
  const double A = coeff_A(curve, phi), B = coeff_B(curve, phi);
  const double z = v * v;
  auto fdf = [&](double d) {
    const Jet q = curve.support(phi + d);
    return std::pair{z_of_delta(curve, phi, d) - z, (q.v + q.d2) * std::sin(d)};
  };
  double hi = std::min(kPi, 2.0 * std::sqrt(z / A));
  while (fdf(hi).first < 0.0) {
    if (hi >= kPi) throw Error(ErrorCode::NoConvergence, "z exceeds the range of the implicit step");
    hi = std::min(kPi, 2.0 * hi);
  }
  const double delta = newton_bracketed(fdf, 0.0, hi, root);

  LazutkinStep out;
  out.delta = delta;
  out.phi_next = phi + 2.0 * delta;
  const double z_next = z + curve.support(phi + 2.0 * delta).v - curve.support(phi).v -
                        2.0 * curve.support(phi + delta).d1 * std::sin(delta);
  out.v_next = std::sqrt(z_next);
  out.residual1 = std::abs(out.phi_next - phi - 2.0 * v / std::sqrt(A));
  out.residual2 = std::abs(out.v_next - v - B * v * v / (2.0 * std::pow(A, 1.5)));
  return out;
}

struct LazutkinOrders {
  std::vector<double> v;
  std::vector<double> residual1;
  std::vector<double> residual2;
  /// residual(v) / residual(v/2) for consecutive rungs.
  std::vector<double> ratio1;
  std::vector<double> ratio2;
};

inline LazutkinOrders lazutkin_orders(const SupportCurve& curve, double phi,
                                      const std::vector<double>& ladder = {0.05, 0.025, 0.0125}) {
  LazutkinOrders out;
  for (double v : ladder) {
    const LazutkinStep s = lazutkin_step_check(curve, phi, v);
    out.v.push_back(v);
    out.residual1.push_back(s.residual1);
    out.residual2.push_back(s.residual2);
  }
  for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
    out.ratio1.push_back(out.residual1[i] / out.residual1[i + 1]);
    out.ratio2.push_back(out.residual2[i] / out.residual2[i + 1]);
  }
  return out;
}

/// (p'' + p)(phibar) sin(delta) / 2: the mixed partial of the generating function.
inline double twist_value(const SupportCurve& curve, double phibar, double delta) {
  return coeff_A(curve, phibar) * std::sin(delta);
}

inline double twist_fd(const SupportCurve& curve, double phibar, double delta, double h = 1e-4) {
  const double p1 = phibar - delta, p2 = phibar + delta;
  auto S = [&](double a, double b) { return generating_function(curve, a, b); };
  return (S(p1 + h, p2 + h) - S(p1 + h, p2 - h) - S(p1 - h, p2 + h) + S(p1 - h, p2 - h)) / (4 * h * h);
}

struct TwistProfile {
  double min_value = 0.0;
  double max_fd_rel_err = 0.0;
};

/// Minimum of the twist over the grid, cross-checked against a finite-difference
/// mixed partial of the generating function at `fd_nodes` random grid nodes.
inline TwistProfile twist_profile(const SupportCurve& curve, const std::vector<double>& phibar_grid,
                                  const std::vector<double>& delta_grid, int fd_nodes = 20,
                                  std::uint64_t seed = 20160531) {
  TwistProfile out;
  out.min_value = std::numeric_limits<double>::infinity();
  for (double t : phibar_grid)
    for (double d : delta_grid) out.min_value = std::min(out.min_value, twist_value(curve, t, d));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_t(0, phibar_grid.size() - 1), pick_d(0, delta_grid.size() - 1);
  for (int k = 0; k < fd_nodes; ++k) {
    const double t = phibar_grid[pick_t(rng)], d = delta_grid[pick_d(rng)];
    const double exact = twist_value(curve, t, d);
    out.max_fd_rel_err = std::max(out.max_fd_rel_err, std::abs(twist_fd(curve, t, d) - exact) / std::abs(exact));
  }
  return out;
}

inline std::vector<double> uniform_grid(double lo, double hi, int n, bool include_hi = true) {
  std::vector<double> g(n);
  const int div = include_hi ? n - 1 : n;
  for (int k = 0; k < n; ++k) g[k] = lo + (hi - lo) * k / div;
  return g;
}

}  // namespace angbill
