#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <vector>

#include "angbill/error.hpp"

namespace angbill {

/// One term c * x^i * y^j of a bivariate polynomial literal.
struct Term2 {
  int i = 0;
  int j = 0;
  double c = 0.0;
};

/// Real polynomial in (x, y), stored as a dense square coefficient grid.
///
/// The grid side is trimmed to degree + 1 after every operation, so the grid
/// never carries trailing zero rows or columns beyond the total degree.
class BivariatePoly {
 public:
  BivariatePoly() = default;

  BivariatePoly(std::initializer_list<Term2> terms) {
    for (const auto& t : terms) add_term(t.i, t.j, t.c);
  }

  explicit BivariatePoly(const std::vector<Term2>& terms) {
    for (const auto& t : terms) add_term(t.i, t.j, t.c);
  }

  static BivariatePoly constant(double c) { return BivariatePoly{{0, 0, c}}; }
  static BivariatePoly x() { return BivariatePoly{{1, 0, 1.0}}; }
  static BivariatePoly y() { return BivariatePoly{{0, 1, 1.0}}; }

  /// Grid side (max exponent + 1 in either variable).
  int side() const { return side_; }

  double coeff(int i, int j) const {
    if (i < 0 || j < 0 || i >= side_ || j >= side_) return 0.0;
    return c_[idx(i, j)];
  }

  void add_term(int i, int j, double c) {
    if (i < 0 || j < 0) throw Error(ErrorCode::InvalidInput, "negative exponent");
    if (c == 0.0) return;
    grow(std::max(i, j) + 1);
    c_[idx(i, j)] += c;
    trim();
  }

  /// Total degree; -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (int i = 0; i < side_; ++i)
      for (int j = 0; j < side_; ++j)
        if (c_[idx(i, j)] != 0.0) d = std::max(d, i + j);
    return d;
  }

  bool is_zero() const { return degree() < 0; }

  std::vector<Term2> terms() const {
    std::vector<Term2> out;
    for (int i = 0; i < side_; ++i)
      for (int j = 0; j < side_; ++j)
        if (c_[idx(i, j)] != 0.0) out.push_back({i, j, c_[idx(i, j)]});
    return out;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  double operator()(double x, double y) const { return eval(x, y); }

  /// Horner evaluation over any ring scalar (double, Jet, long double).
  template <class T>
  T eval(const T& x, const T& y) const {
    T acc(0.0);
    for (int i = side_ - 1; i >= 0; --i) {
      T row(0.0);
      for (int j = side_ - 1; j >= 0; --j) row = row * y + T(c_[idx(i, j)]);
      acc = acc * x + row;
    }
    return acc;
  }

  /// d^{ox+oy} / dx^ox dy^oy, exact on coefficients.
  BivariatePoly partial(int ox, int oy) const {
    BivariatePoly out;
    if (side_ == 0) return out;
    out.grow(side_);
    for (int i = ox; i < side_; ++i)
      for (int j = oy; j < side_; ++j) {
        double c = c_[idx(i, j)];
        if (c == 0.0) continue;
        for (int k = 0; k < ox; ++k) c *= (i - k);
        for (int k = 0; k < oy; ++k) c *= (j - k);
        out.c_[out.idx(i - ox, j - oy)] = c;
      }
    out.trim();
    return out;
  }

  BivariatePoly dx() const { return partial(1, 0); }
  BivariatePoly dy() const { return partial(0, 1); }

  friend BivariatePoly operator+(const BivariatePoly& a, const BivariatePoly& b) {
    BivariatePoly out;
    out.grow(std::max(a.side_, b.side_));
    for (int i = 0; i < out.side_; ++i)
      for (int j = 0; j < out.side_; ++j) out.c_[out.idx(i, j)] = a.coeff(i, j) + b.coeff(i, j);
    out.trim();
    return out;
  }

  friend BivariatePoly operator*(double s, const BivariatePoly& a) {
    BivariatePoly out = a;
    for (double& v : out.c_) v *= s;
    out.trim();
    return out;
  }
  friend BivariatePoly operator*(const BivariatePoly& a, double s) { return s * a; }
  friend BivariatePoly operator-(const BivariatePoly& a) { return -1.0 * a; }
  friend BivariatePoly operator-(const BivariatePoly& a, const BivariatePoly& b) { return a + (-b); }

  friend BivariatePoly operator*(const BivariatePoly& a, const BivariatePoly& b) {
    BivariatePoly out;
    if (a.side_ == 0 || b.side_ == 0) return out;
    out.grow(a.side_ + b.side_ - 1);
    for (int i = 0; i < a.side_; ++i)
      for (int j = 0; j < a.side_; ++j) {
        const double ca = a.c_[a.idx(i, j)];
        if (ca == 0.0) continue;
        for (int k = 0; k < b.side_; ++k)
          for (int l = 0; l < b.side_; ++l) out.c_[out.idx(i + k, j + l)] += ca * b.c_[b.idx(k, l)];
      }
    out.trim();
    return out;
  }

  BivariatePoly& operator+=(const BivariatePoly& o) { return *this = *this + o; }
  BivariatePoly& operator-=(const BivariatePoly& o) { return *this = *this - o; }
  BivariatePoly& operator*=(const BivariatePoly& o) { return *this = *this * o; }

  friend BivariatePoly pow(const BivariatePoly& a, int k) {
    BivariatePoly out = constant(1.0);
    for (int i = 0; i < k; ++i) out *= a;
    return out;
  }

  friend bool operator==(const BivariatePoly& a, const BivariatePoly& b) {
    const int s = std::max(a.side_, b.side_);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j)
        if (a.coeff(i, j) != b.coeff(i, j)) return false;
    return true;
  }

 private:
  int idx(int i, int j) const { return i * side_ + j; }

  void grow(int s) {
    if (s <= side_) return;
    std::vector<double> next(static_cast<std::size_t>(s) * s, 0.0);
    for (int i = 0; i < side_; ++i)
      for (int j = 0; j < side_; ++j) next[i * s + j] = c_[idx(i, j)];
    c_ = std::move(next);
    side_ = s;
  }

  void trim() {
    const int s = degree() + 1;
    if (s == side_) return;
    const int keep = std::min(s, side_);
    std::vector<double> next(static_cast<std::size_t>(s) * s, 0.0);
    for (int i = 0; i < keep; ++i)
      for (int j = 0; j < keep; ++j) next[i * s + j] = c_[idx(i, j)];
    c_ = std::move(next);
    side_ = s;
  }

  int side_ = 0;
  std::vector<double> c_;
};

/// Homogeneous polynomial of degree d in (x, y, z); the coefficient of
/// x^i y^j z^(d-i-j) is stored for every i + j <= d.
///
/// A negative degree denotes the zero polynomial produced by differentiating
/// past the degree.
class HomogeneousPoly3 {
 public:
  HomogeneousPoly3() : HomogeneousPoly3(-1) {}
  explicit HomogeneousPoly3(int degree)
      : d_(degree), c_(degree >= 0 ? static_cast<std::size_t>(degree + 1) * (degree + 1) : 0, 0.0) {}

  int degree() const { return d_; }

  double coeff(int i, int j) const {
    if (d_ < 0 || i < 0 || j < 0 || i + j > d_) return 0.0;
    return c_[idx(i, j)];
  }
  void set(int i, int j, double c) {
    if (i < 0 || j < 0 || i + j > d_) throw Error(ErrorCode::InvalidInput, "monomial outside degree");
    c_[idx(i, j)] = c;
  }
  void add(int i, int j, double c) { set(i, j, coeff(i, j) + c); }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](double v) { return v == 0.0; });
  }

  double operator()(double x, double y, double z) const {
    if (d_ < 0) return 0.0;
    std::vector<double> px(d_ + 1, 1.0), py(d_ + 1, 1.0), pz(d_ + 1, 1.0);
    for (int k = 1; k <= d_; ++k) {
      px[k] = px[k - 1] * x;
      py[k] = py[k - 1] * y;
      pz[k] = pz[k - 1] * z;
    }
    double acc = 0.0;
    for (int i = 0; i <= d_; ++i)
      for (int j = 0; i + j <= d_; ++j) acc += c_[idx(i, j)] * px[i] * py[j] * pz[d_ - i - j];
    return acc;
  }

  /// Partial derivative along variable 0 (x), 1 (y) or 2 (z).
  HomogeneousPoly3 partial(int var) const {
    HomogeneousPoly3 out(d_ - 1);
    if (d_ <= 0) return out;
    for (int i = 0; i <= d_; ++i)
      for (int j = 0; i + j <= d_; ++j) {
        const double c = c_[idx(i, j)];
        const int k = d_ - i - j;
        if (c == 0.0) continue;
        if (var == 0 && i > 0) out.add(i - 1, j, c * i);
        if (var == 1 && j > 0) out.add(i, j - 1, c * j);
        if (var == 2 && k > 0) out.add(i, j, c * k);
      }
    return out;
  }
  HomogeneousPoly3 dx() const { return partial(0); }
  HomogeneousPoly3 dy() const { return partial(1); }
  HomogeneousPoly3 dz() const { return partial(2); }

  friend HomogeneousPoly3 operator+(const HomogeneousPoly3& a, const HomogeneousPoly3& b) {
    if (a.d_ < 0 || (a.is_zero() && a.d_ != b.d_)) return b;
    if (b.d_ < 0 || (b.is_zero() && a.d_ != b.d_)) return a;
    if (a.d_ != b.d_) throw Error(ErrorCode::InvalidInput, "adding homogeneous polynomials of different degree");
    HomogeneousPoly3 out = a;
    for (std::size_t k = 0; k < out.c_.size(); ++k) out.c_[k] += b.c_[k];
    return out;
  }
  friend HomogeneousPoly3 operator*(double s, const HomogeneousPoly3& a) {
    HomogeneousPoly3 out = a;
    for (double& v : out.c_) v *= s;
    return out;
  }
  friend HomogeneousPoly3 operator*(const HomogeneousPoly3& a, double s) { return s * a; }
  friend HomogeneousPoly3 operator-(const HomogeneousPoly3& a) { return -1.0 * a; }
  friend HomogeneousPoly3 operator-(const HomogeneousPoly3& a, const HomogeneousPoly3& b) { return a + (-b); }

  friend HomogeneousPoly3 operator*(const HomogeneousPoly3& a, const HomogeneousPoly3& b) {
    HomogeneousPoly3 out(a.d_ + b.d_);
    if (a.d_ < 0 || b.d_ < 0) return out;
    for (int i = 0; i <= a.d_; ++i)
      for (int j = 0; i + j <= a.d_; ++j) {
        const double ca = a.c_[a.idx(i, j)];
        if (ca == 0.0) continue;
        for (int k = 0; k <= b.d_; ++k)
          for (int l = 0; k + l <= b.d_; ++l) out.c_[out.idx(i + k, j + l)] += ca * b.c_[b.idx(k, l)];
      }
    return out;
  }

  friend HomogeneousPoly3 pow(const HomogeneousPoly3& a, int k) {
    HomogeneousPoly3 out(0);
    out.set(0, 0, 1.0);
    for (int i = 0; i < k; ++i) out = out * a;
    return out;
  }

 private:
  int idx(int i, int j) const { return i * (d_ + 1) + j; }

  int d_;
  std::vector<double> c_;
};

/// f~(x, y, z) = z^d f(x/z, y/z) with d = deg f.
inline HomogeneousPoly3 homogenize(const BivariatePoly& f) {
  const int d = f.degree();
  HomogeneousPoly3 out(d);
  for (const auto& t : f.terms()) out.set(t.i, t.j, t.c);
  return out;
}

/// Restriction to the chart z = 1.
inline BivariatePoly dehomogenize(const HomogeneousPoly3& F) {
  BivariatePoly out;
  for (int i = 0; i <= F.degree(); ++i)
    for (int j = 0; i + j <= F.degree(); ++j) out.add_term(i, j, F.coeff(i, j));
  return out;
}

/// H(f) = f_xx f_y^2 - 2 f_xy f_x f_y + f_yy f_x^2.
///
/// Works for any polynomial type exposing dx(), dy() and ring operations; on a
/// HomogeneousPoly3 z is treated as a parameter.
template <class Poly>
Poly h_operator(const Poly& f) {
  const Poly fx = f.dx(), fy = f.dy();
  const Poly fxx = fx.dx(), fxy = fx.dy(), fyy = fy.dy();
  return fxx * fy * fy - 2.0 * (fxy * fx * fy) + fyy * fx * fx;
}

/// Determinant of the 3x3 matrix of second partials of F.
inline HomogeneousPoly3 hessian3(const HomogeneousPoly3& F) {
  if (F.degree() < 2) throw Error(ErrorCode::DegreeTooLow, "Hessian needs degree >= 2");
  const std::array<HomogeneousPoly3, 3> g{F.dx(), F.dy(), F.dz()};
  HomogeneousPoly3 m[3][3];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) m[a][b] = g[a].partial(b);
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// x^2 + y^2 as a polynomial.
inline BivariatePoly radius_squared() { return BivariatePoly{{2, 0, 1.0}, {0, 2, 1.0}}; }

}  // namespace angbill
