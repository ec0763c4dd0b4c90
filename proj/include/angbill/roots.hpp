#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "angbill/error.hpp"

namespace angbill {

struct RootOptions {
  int max_iter = 100;
  double x_tol = 1e-15;
};

/// Newton iteration kept inside a sign-change bracket [lo, hi]; falls back to
/// bisection whenever the Newton step leaves the bracket or stalls.
///
/// `fdf(x)` returns {f(x), f'(x)}. Requires f(lo) and f(hi) of opposite sign.
template <class F>
double newton_bracketed(F&& fdf, double lo, double hi, const RootOptions& opt = {}) {
  double flo = fdf(lo).first;
  double fhi = fdf(hi).first;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw Error(ErrorCode::NoConvergence, "root not bracketed");
  if (flo > 0.0) {
    std::swap(lo, hi);
    std::swap(flo, fhi);
  }
  // Invariant: f(lo) < 0 < f(hi); lo may exceed hi.
  double x = 0.5 * (lo + hi);
  double last_step = std::abs(hi - lo);
  for (int it = 0; it < opt.max_iter; ++it) {
    const auto [fx, dfx] = fdf(x);
    if (fx == 0.0) return x;
    if (fx < 0.0) lo = x; else hi = x;
    const double width = std::abs(hi - lo);
    const double scale = opt.x_tol * std::max(1.0, std::abs(x));
    if (width <= scale) return 0.5 * (lo + hi);
    double next = x - fx / dfx;
    const bool inside = dfx != 0.0 && std::isfinite(next) &&
                        (next - lo) * (next - hi) < 0.0 &&
                        std::abs(next - x) < 0.5 * last_step;
    if (!inside) next = 0.5 * (lo + hi);
    last_step = std::abs(next - x);
    if (last_step <= 0.25 * scale) return next;
    x = next;
  }
  throw Error(ErrorCode::NoConvergence, "bracketed Newton exceeded iteration budget");
}

/// Plain bisection on [lo, hi] to absolute width `tol`.
template <class F>
double bisect(F&& f, double lo, double hi, double tol, int max_iter = 200) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw Error(ErrorCode::NoConvergence, "root not bracketed");
  for (int it = 0; it < max_iter && std::abs(hi - lo) > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// First sign change of f on a uniform grid of `cells` cells over [lo, hi].
template <class F>
std::optional<std::pair<double, double>> scan_sign_change(F&& f, double lo, double hi, int cells) {
  const double h = (hi - lo) / cells;
  double a = lo;
  double fa = f(a);
  for (int i = 1; i <= cells; ++i) {
    const double b = (i == cells) ? hi : lo + i * h;
    const double fb = f(b);
    if (fa == 0.0 || (fa > 0.0) != (fb > 0.0)) return std::pair{a, b};
    a = b;
    fa = fb;
  }
  return std::nullopt;
}

}  // namespace angbill
