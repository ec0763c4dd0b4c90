#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace angbill;
using testing_support::ellipse_poly;
using testing_support::fermat4;
using testing_support::rel_err;

namespace {

BivariatePoly one() { return BivariatePoly::constant(1.0); }

// Level set of a convex function: a convex quartic oval with no integral.
BivariatePoly convex_quartic() {
  return BivariatePoly{{4, 0, 1.0}, {0, 4, 2.0}, {2, 0, 1.0}, {0, 2, 1.0}, {1, 0, 0.3}, {0, 0, -2.0}};
}

CurveTrace trace_of(const BivariatePoly& f, double step = 1e-2) {
  return trace_curve(ImplicitCurveModel(f, radial_seed(f)), step);
}

std::vector<AngularState> seeds_near(const SupportCurve& c, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi), fr(1.02, 1.3);
  std::vector<AngularState> out;
  for (int i = 0; i < n; ++i) {
    const double t = ang(rng);
    out.push_back({t, fr(rng) * c.r(t)});
  }
  return out;
}

}  // namespace

TEST(Invariance, EllipseIntegral) {
  const double a = 2, b = 1;
  const BivariatePoly f = ellipse_poly(a, b);
  auto G = [&](PlanePoint q) { return f(q.x, q.y) / norm2(q); };
  EXPECT_LT(invariance_residual(make_ellipse(a, b), G, 500, seeds_near(make_ellipse(a, b), 20, 40)), 1e-8);
}

TEST(Invariance, PerturbedCurveBreaksIt) {
  const BivariatePoly f = ellipse_poly(2, 1);
  auto G = [&](PlanePoint q) { return f(q.x, q.y) / norm2(q); };
  const SupportCurve c = make_trig_poly(1.0, {0, 0, 0.05}, {});
  EXPECT_GT(invariance_residual(c, G, 500, seeds_near(c, 20, 41)), 1e-3);
}

TEST(Invariance, OffsetCircleIndependentOfO) {
  const double R = 1.0, x0 = 0.5;
  const SupportCurve c = make_offset_circle(R, x0);
  // plane frame: (x^2 + y^2 - R^2) / ((x - x0)^2 + y^2); states live in the O frame
  auto G = [&](PlanePoint q) {
    const PlanePoint P = c.origin() + q;
    return (norm2(P) - R * R) / norm2(q);
  };
  EXPECT_LT(invariance_residual(c, G, 500, seeds_near(c, 20, 42)), 1e-8);
}

TEST(IntegralData, DegreeCheck) {
  EXPECT_NO_THROW(make_integral_data(ellipse_poly(2, 1), one(), 1, 1.0));
  EXPECT_THROW(make_integral_data(ellipse_poly(2, 1), one(), 1, 2.0), Error);
  const IntegralData d = make_integral_data(ellipse_poly(2, 1), ellipse_poly(1, 1), 2, 3.0);
  EXPECT_DOUBLE_EQ(d.m, 1.5);
}

TEST(LemmaE1, EllipseResidual) {
  const BivariatePoly f = ellipse_poly(2, 1);
  const IntegralData d = make_integral_data(f, one(), 1, 1.0);
  const CurveTrace tr = trace_of(f);
  const std::size_t stride = tr.size() / 64;
  for (std::size_t i = 0, n = 0; n < 64; i += stride, ++n) {
    EXPECT_LT(lemma_e1_residual(d, tr.points[i], 1e-3), 1e-8);
    EXPECT_LT(lemma_e1_residual(d, tr.points[i], -1e-3), 1e-8);
  }
}

TEST(LemmaE1, MuFormula) {
  const PlanePoint q{1.0, 2.0};
  const Vec2 g{0.5, -1.0};
  const double eps = 0.01;
  // -(5 eps) / (5 + 2 eps (1 * -1 - 2 * 0.5))
  EXPECT_NEAR(lemma_mu(q, g, eps), -5 * eps / (5 + 2 * eps * -2.0), 1e-16);
}

TEST(LemmaE1, MuSeriesTruncationIsOrderSeven) {
  const BivariatePoly f = ellipse_poly(2, 1);
  const IntegralData d = make_integral_data(f, one(), 1, 1.0);
  const CurveTrace tr = trace_of(f);
  for (std::size_t i : {tr.size() / 8, 3 * tr.size() / 8, 5 * tr.size() / 8}) {
    const PlanePoint q = tr.points[i];
    const Vec2 g = d.gradF(q.x, q.y);
    auto err = [&](double e) { return std::abs(lemma_mu(q, g, e) - lemma_mu_series(q, g, e, 6)); };
    for (double e : {0.1, 0.05}) {
      const double ratio = err(e) / err(e / 2);
      EXPECT_GT(ratio, 100.0);
      EXPECT_LT(ratio, 160.0);
    }
  }
}

TEST(LemmaE1, LowOrderCoefficientsVanishOnGenericCurves) {
  // For data that fails the identity the first surviving term is eps^3.
  const BivariatePoly f = convex_quartic();
  const IntegralData d{f, one(), 1, 1.0, 1.0};
  const CurveTrace tr = trace_of(f);
  const std::vector<double> eps{0.01, 0.005, 0.0025, 0.00125};
  for (std::size_t i : {std::size_t{100}, tr.size() / 4, tr.size() / 2}) {
    std::vector<double> v;
    for (double e : eps) v.push_back(lemma_e1_defect(d, tr.points[i], e));
    EXPECT_GT(loglog_slope(eps, v), 2.5);
  }
  // for an integrable pair the defect is rounding noise
  const IntegralData ell = make_integral_data(ellipse_poly(2, 1), one(), 1, 1.0);
  const CurveTrace te = trace_of(ellipse_poly(2, 1));
  for (double e : {1e-3, 1e-4, 1e-5}) EXPECT_LT(lemma_e1_defect(ell, te.points[7], e), 1e-13);
}

TEST(RemarkableIdentity, Ellipse) {
  const double a = 2, b = 1.5;
  const BivariatePoly f = ellipse_poly(a, b);
  const auto r = remarkable_identity(make_integral_data(f, one(), 1, 1.0), trace_of(f));
  EXPECT_LT(rel_err(r.value, 8 / (a * a * b * b)), 1e-10);
  EXPECT_LT(r.spread, 1e-10);
}

TEST(RemarkableIdentity, Circle) {
  const double R = 1.3;
  const BivariatePoly f{{2, 0, 1.0}, {0, 2, 1.0}, {0, 0, -R * R}};
  const auto r = remarkable_identity(make_integral_data(f, one(), 1, 1.0), trace_of(f));
  EXPECT_LT(rel_err(r.value, 8 * R * R), 1e-12);
  EXPECT_LT(r.spread, 1e-12);
}

TEST(RemarkableIdentity, ConvexQuarticControl) {
  const BivariatePoly f = convex_quartic();
  const IntegralData d{f, one(), 1, 1.0, 1.0};
  EXPECT_GT(remarkable_identity(d, trace_of(f)).spread, 1e-3);
}

TEST(RemarkableIdentity, SignViolation) {
  const BivariatePoly f = ellipse_poly(2, 1);
  const IntegralData d = make_integral_data(f, BivariatePoly::constant(-1.0), 1, 1.0);
  try {
    remarkable_identity(d, trace_of(f));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SignViolation);
  }
}

TEST(E4, EllipseConstant) {
  const double a = 2, b = 1;
  const BivariatePoly f = ellipse_poly(a, b);
  const auto r = e4_constancy_check(make_integral_data(f, one(), 1, 1.0), trace_of(f));
  EXPECT_LT(rel_err(r.value, -64 / std::pow(a * b, 4)), 1e-12);
  EXPECT_LT(r.spread, 1e-10);
}

TEST(E4, HessianIsMinusHOnConicCurve) {
  const BivariatePoly f = ellipse_poly(2, 1);
  const HomogeneousPoly3 hess = hessian3(homogenize(f));
  const BivariatePoly H = h_operator(f);
  for (auto q : trace_of(f).points) ASSERT_NEAR(hess(q.x, q.y, 1.0), -H(q.x, q.y), 1e-10);
}

TEST(DegreeLedger, Examples) {
  const DegreeLedger a = degree_bookkeeping(2, 1, 0);
  EXPECT_EQ(a.p_half, 1);
  EXPECT_EQ(a.deg_lhs, 4);
  EXPECT_EQ(a.deg_rhs, 0);
  EXPECT_EQ(a.z_power, 4);
  const DegreeLedger b = degree_bookkeeping(4, 1, 0);
  EXPECT_EQ(b.p_half, 2);
  EXPECT_EQ(b.deg_lhs, 16);
  EXPECT_EQ(b.deg_rhs, 12);
  const DegreeLedger c = degree_bookkeeping(3, 2, 0);
  EXPECT_EQ(c.p_half, 3);
  EXPECT_EQ(c.deg_lhs, 20);
  EXPECT_EQ(c.deg_rhs, 12);
  EXPECT_EQ(c.z_power, 8);
  try {
    degree_bookkeeping(3, 1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParityError);
  }
}

TEST(DegreeLedger, BalanceTable) {
  int cases = 0;
  for (int d = 2; d <= 6; ++d)
    for (int k = 1; k <= 3; ++k)
      for (int q = 0; q <= 3; ++q) {
        if ((k * d + q) % 2) continue;
        const DegreeLedger l = degree_bookkeeping(d, k, q);
        EXPECT_EQ(l.deg_lhs - l.deg_rhs, 4 * k);
        EXPECT_EQ(l.z_power, 4 * k);
        // 6q + 2k(3d - 4) written through p
        EXPECT_EQ(l.deg_lhs, 6 * q + 2 * k * (3 * d - 4));
        ++cases;
      }
  EXPECT_GE(cases, 20);
}

TEST(Certify, Fermat) {
  const BivariatePoly f = fermat4();
  const Certificate c = certify(f, trace_curve(ImplicitCurveModel(f, {1, 0}), 1e-3));
  EXPECT_EQ(c.verdict, Verdict::NOT_POLY_INTEGRABLE);
  ASSERT_EQ(c.witnesses.size(), 4u);
  const BivariatePoly H = h_operator(f);
  for (const auto& w : c.witnesses) {
    EXPECT_EQ(w.kind, PointKind::inflection);
    EXPECT_NEAR(std::abs(w.point.x) + std::abs(w.point.y), 1.0, 1e-8);
    EXPECT_LT(std::abs(f(w.point.x, w.point.y)), 1e-8);
    EXPECT_LT(std::abs(H(w.point.x, w.point.y)), 1e-8);
    EXPECT_GT(norm2(w.point), 1e-8);
  }
}

TEST(Certify, ConicIsRejected) {
  const BivariatePoly f = ellipse_poly(2, 1);
  try {
    certify(f, trace_of(f));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegreeTooLow);
  }
}

TEST(Certify, ConvexQuarticIsInconclusive) {
  const BivariatePoly f = convex_quartic();
  const Certificate c = certify(f, trace_of(f));
  EXPECT_EQ(c.verdict, Verdict::INCONCLUSIVE);
  EXPECT_TRUE(c.witnesses.empty());
  EXPECT_FALSE(c.assumptions.empty());
}

TEST(Certify, TwoOvalsCommonTangent) {
  // y^2 + (x+1)(x-1)(x-3)(x-5): ovals over [-1,1] and [3,5], O inside the first
  BivariatePoly f = BivariatePoly{{0, 2, 1.0}};
  f += BivariatePoly{{1, 0, 1.0}, {0, 0, 1.0}} * BivariatePoly{{1, 0, 1.0}, {0, 0, -1.0}} *
       BivariatePoly{{1, 0, 1.0}, {0, 0, -3.0}} * BivariatePoly{{1, 0, 1.0}, {0, 0, -5.0}};
  const CurveTrace t1 = trace_curve(ImplicitCurveModel(f, {-1, 0}), 1e-3);
  const CurveTrace t2 = trace_curve(ImplicitCurveModel(f, {3, 0}), 1e-3);
  const Certificate c = certify_common_tangent(f, t1, t2);
  EXPECT_EQ(c.verdict, Verdict::NOT_POLY_INTEGRABLE);
  ASSERT_EQ(c.witnesses.size(), 2u);
  // the common tangents are horizontal by the symmetry x -> 4 - x; their height is max y on an oval
  double ymax = 0;
  for (auto q : t1.points) ymax = std::max(ymax, q.y);
  for (const auto& w : c.witnesses) {
    EXPECT_EQ(w.kind, PointKind::singular);
    EXPECT_NEAR(w.point.x, 0.0, 1e-9);
    EXPECT_NEAR(std::abs(w.point.y), 1.0 / ymax, 1e-6);
  }
}
