#pragma once

#include <cmath>
#include <numbers>

#include "angbill/error.hpp"

namespace angbill {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wrap an angle into [0, 2pi).
inline double normalize_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Signed difference a - b wrapped into (-pi, pi].
inline double angle_diff(double a, double b) {
  double d = std::remainder(a - b, kTwoPi);
  if (d <= -kPi) d += kTwoPi;
  return d;
}

/// Point (or free vector) of the Euclidean plane, coordinates relative to O.
struct PlanePoint {
  double x = 0.0;
  double y = 0.0;

  friend constexpr PlanePoint operator+(PlanePoint a, PlanePoint b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr PlanePoint operator-(PlanePoint a, PlanePoint b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr PlanePoint operator-(PlanePoint a) { return {-a.x, -a.y}; }
  friend constexpr PlanePoint operator*(double s, PlanePoint a) { return {s * a.x, s * a.y}; }
  friend constexpr PlanePoint operator*(PlanePoint a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr PlanePoint operator/(PlanePoint a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(PlanePoint, PlanePoint) = default;
};

using Vec2 = PlanePoint;

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
constexpr double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double distance(PlanePoint a, PlanePoint b) { return norm(a - b); }
inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }
/// Rotation by +pi/2.
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline double polar_angle(PlanePoint p) { return normalize_angle(std::atan2(p.y, p.x)); }

/// Oriented line {x : <n, x> = p} with n = (cos phi, sin phi).
///
/// The direction of travel is v = perp(n), so (n, v) is a positive basis and
/// the momentum x v_y - y v_x of v about O equals p. Positive lines have
/// p > 0. The pair (phi + pi, -p) is the same point set with the opposite
/// orientation.
struct OrientedLine {
  double phi = 0.0;
  double p = 0.0;

  OrientedLine() = default;
  OrientedLine(double angle, double signed_distance)
      : phi(normalize_angle(angle)), p(signed_distance) {}

  Vec2 normal() const { return unit(phi); }
  Vec2 direction() const { return perp(normal()); }
  PlanePoint foot() const { return p * normal(); }
  PlanePoint point_at(double t) const { return foot() + t * direction(); }
  double signed_offset(PlanePoint q) const { return dot(normal(), q) - p; }
  OrientedLine reversed() const { return {phi + kPi, -p}; }
  bool is_positive() const { return p > 0.0; }

  /// Line through q travelling along v (v need not be unit).
  static OrientedLine through(PlanePoint q, Vec2 v) {
    const Vec2 d = v / norm(v);
    const Vec2 n{d.y, -d.x};
    return {std::atan2(n.y, n.x), dot(n, q)};
  }
};

inline bool same_line(const OrientedLine& a, const OrientedLine& b,
                      double angle_tol = 1e-12, double dist_tol = 1e-12) {
  return std::abs(angle_diff(a.phi, b.phi)) <= angle_tol && std::abs(a.p - b.p) <= dist_tol;
}

struct DualityOptions {
  double degeneracy_tol = 1e-9;
};

/// Pole of a line with respect to the unit circle at O: n / p.
///
/// The pole does not depend on orientation, so negative lines are accepted
/// and give the same point as their reversal.
inline PlanePoint dual_of_line(const OrientedLine& line, const DualityOptions& opt = {}) {
  if (std::abs(line.p) < opt.degeneracy_tol)
    throw Error(ErrorCode::DegenerateDual, "line passes through O");
  return line.normal() / line.p;
}

/// Polar line of a point; returned with positive orientation.
inline OrientedLine dual_of_point(PlanePoint P, const DualityOptions& opt = {}) {
  const double r = norm(P);
  if (r <= opt.degeneracy_tol) throw Error(ErrorCode::DegenerateDual, "point coincides with O");
  return {std::atan2(P.y, P.x), 1.0 / r};
}

/// Angular momentum x v_y - y v_x of a vector v attached at q.
constexpr double momentum(PlanePoint q, Vec2 v) { return q.x * v.y - q.y * v.x; }

/// Sign of the momentum about O of `direction` travelling along `line`,
/// evaluated at the foot point shifted by `foot_shift` along the line.
inline int momentum_sign(const OrientedLine& line, Vec2 direction, double foot_shift = 0.0,
                         const DualityOptions& opt = {}) {
  if (std::abs(line.p) < opt.degeneracy_tol)
    throw Error(ErrorCode::ZeroMomentum, "line passes through O");
  const double sigma = momentum(line.point_at(foot_shift), direction);
  return sigma > 0.0 ? 1 : -1;
}

}  // namespace angbill
