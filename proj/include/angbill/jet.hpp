#pragma once

#include <cmath>

namespace angbill {

/// Value of a scalar function together with its first three derivatives.
///
/// Used to carry exact derivatives of closed-form curve data (position and
/// supporting functions) through arithmetic, so callers never have to
/// difference numerically. Composition follows the third-order chain rule.
struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;

  constexpr Jet() = default;
  constexpr Jet(double value) : v(value) {}
  constexpr Jet(double value, double a, double b, double c)
      : v(value), d1(a), d2(b), d3(c) {}

  static constexpr Jet variable(double t) { return {t, 1.0, 0.0, 0.0}; }

  /// g(f(t)) given the derivatives of the outer function at f(t).
  constexpr Jet compose(double g0, double g1, double g2, double g3) const {
    return {g0, g1 * d1, g2 * d1 * d1 + g1 * d2,
            g3 * d1 * d1 * d1 + 3.0 * g2 * d1 * d2 + g1 * d3};
  }

  friend constexpr Jet operator+(const Jet& a, const Jet& b) {
    return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
  }
  friend constexpr Jet operator-(const Jet& a, const Jet& b) {
    return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
  }
  friend constexpr Jet operator-(const Jet& a) { return {-a.v, -a.d1, -a.d2, -a.d3}; }
  friend constexpr Jet operator*(const Jet& a, const Jet& b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1,
            a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
            a.d3 * b.v + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.v * b.d3};
  }
  friend constexpr Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

  friend constexpr Jet reciprocal(const Jet& a) {
    const double i = 1.0 / a.v;
    return a.compose(i, -i * i, 2.0 * i * i * i, -6.0 * i * i * i * i);
  }

  Jet& operator+=(const Jet& o) { return *this = *this + o; }
  Jet& operator-=(const Jet& o) { return *this = *this - o; }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
};

inline Jet sin(const Jet& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return a.compose(s, c, -s, -c);
}

inline Jet cos(const Jet& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return a.compose(c, -s, -c, s);
}

inline Jet sqrt(const Jet& a) {
  const double r = std::sqrt(a.v);
  return a.compose(r, 0.5 / r, -0.25 / (r * a.v), 0.375 / (r * a.v * a.v));
}

/// a^e for real e, a.v > 0.
inline Jet pow(const Jet& a, double e) {
  const double p = std::pow(a.v, e);
  const double x = a.v;
  return a.compose(p, e * p / x, e * (e - 1.0) * p / (x * x),
                   e * (e - 1.0) * (e - 2.0) * p / (x * x * x));
}

}  // namespace angbill
