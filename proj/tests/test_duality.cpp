#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace angbill;
using testing_support::ellipse_poly;

namespace {

IntegralPoly ellipse_integral(double a, double b) {
  return homogenize_integral({{0, 2, 0, 1 / (b * b)}, {0, 0, 2, 1 / (a * a)}, {2, 0, 0, -1.0}}, 2);
}

// Near-boundary positive lines: incidence angle below pi/6.
std::vector<OrientedLine> near_tangent_lines(const BilliardTable& t, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi), fr(0.97, 0.999);
  std::vector<OrientedLine> out;
  while (static_cast<int>(out.size()) < n) {
    const double phi = ang(rng);
    const OrientedLine l(phi, fr(rng) * t.support(phi).v);
    if (incidence_angle(t, l) < kPi / 6) out.push_back(l);
  }
  return out;
}

}  // namespace

TEST(Table, DualEllipse) {
  const double a = 2, b = 1;
  const BilliardTable t = table_from_dual(make_ellipse(a, b));
  for (double psi : uniform_grid(0.0, kTwoPi, 256, false)) {
    const PlanePoint q = t.point(psi);
    EXPECT_LT(std::abs(a * a * q.x * q.x + b * b * q.y * q.y - 1.0), 1e-10);
  }
}

TEST(Table, CircleRadiusInverts) {
  const BilliardTable t = table_from_dual(make_ellipse(2.5, 2.5));
  for (double psi : {0.0, 1.0, 4.0}) EXPECT_NEAR(norm(t.point(psi)), 0.4, 1e-14);
}

TEST(Table, FermatDualCurve) {
  CurveValidation v;
  v.allow_flat = true;
  const SupportCurve Gamma = make_implicit_support(testing_support::fermat4(), v);
  for (PlanePoint q : dual_of_curve_samples(Gamma, 256))
    EXPECT_NEAR(std::pow(std::abs(q.x), 4.0 / 3) + std::pow(std::abs(q.y), 4.0 / 3), 1.0, 1e-8);
}

TEST(Table, DualSamplesReproduceGamma) {
  const double a = 2, b = 1;
  const SupportCurve Gamma = make_ellipse(a, b);
  const BivariatePoly f = ellipse_poly(a, b);
  for (PlanePoint q : dual_curve_samples(table_from_dual(Gamma), 256)) EXPECT_LT(std::abs(f(q.x, q.y)), 1e-10);
}

TEST(Table, DoubleDualHausdorff) {
  const SupportCurve Gamma = make_trig_poly(1.0, {0.1, 0, 0.05}, {0, 0.04});
  const auto back = dual_curve_samples(table_from_dual(Gamma), 512);
  // sampled at the same angles, so the Hausdorff distance is bounded by the pointwise one
  const auto grid = uniform_grid(0.0, kTwoPi, 512, false);
  double worst = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double best = 1e9;
    for (PlanePoint q : back) best = std::min(best, distance(q, curve_point(Gamma, grid[i])));
    worst = std::max(worst, best);
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(Orbits, PositiveLinesMatchAngularOrbit) {
  const SupportCurve Gamma = make_ellipse(2, 1);
  const BilliardTable t = table_from_dual(Gamma);
  for (const auto& l : near_tangent_lines(t, 20, 30)) {
    const auto orb = birkhoff_orbit(t, l, 50);
    const auto duals = dualize_orbit(orb);
    AngularState A = AngularState::from_point(duals[0].point);
    for (std::size_t i = 1; i < duals.size(); ++i) {
      ASSERT_EQ(duals[i - 1].sign, 1);
      A = step_polar(Gamma, A).next;
      ASSERT_LT(distance(A.point(), duals[i].point), 1e-8) << "step " << i;
    }
  }
}

TEST(Orbits, NegativeLineStepsBackward) {
  const SupportCurve Gamma = make_ellipse(2, 1);
  const BilliardTable t = table_from_dual(Gamma);
  for (const auto& l : near_tangent_lines(t, 5, 31)) {
    const OrientedLine neg = l.reversed();
    ASSERT_LT(neg.p, 0.0);
    const auto orb = birkhoff_orbit(t, neg, 50);
    for (const auto& s : orb) ASSERT_LT(s.line.p, 0.0);
    const auto duals = dualize_orbit(orb);
    EXPECT_EQ(duals[0].sign, -1);
    // A(L_1) = L_0 for l_1 = C(l_0); and A(L_0) = L_{-1} with l_{-1} the preimage
    EXPECT_LT(distance(step_polar(Gamma, AngularState::from_point(duals[1].point)).next.point(), duals[0].point), 1e-8);
    const PlanePoint Lm1 = dual_of_line(reflect_inverse(t, {neg}).line);
    EXPECT_LT(distance(step_polar(Gamma, AngularState::from_point(duals[0].point)).next.point(), Lm1), 1e-8);
    EXPECT_LT(dual_orbit_deviation(Gamma, orb), 1e-8);
  }
}

TEST(Orbits, TangencyRule) {
  const SupportCurve Gamma = make_ellipse(2, 1);
  const AngularOrbit o = orbit(Gamma, {0.3, 1.02 * Gamma.r(0.3)}, 100);
  for (std::size_t i = 0; i < 100; ++i) {
    const TangencyRuleCheck c = tangency_rule(Gamma, o.states[i].point());
    EXPECT_EQ(c.tangency_between, c.keeps_orientation);
    EXPECT_LT(c.mismatch, 1e-8);
  }
}

TEST(Orbits, TangencyRuleFarFromBoundary) {
  // beyond S on the same tangent the image flips orientation
  const SupportCurve Gamma = make_ellipse(2, 1);
  const double tb = 2.0;
  const PlanePoint T = curve_point(Gamma, tb);
  Vec2 tu = tangent_vector(Gamma, tb);
  tu = tu / norm(tu);
  const double sP = dot(p_curve_sample(Gamma, {tb}).at(0) - T, tu);
  const TangencyRuleCheck c = tangency_rule(Gamma, T + 1.5 * sP * tu);
  EXPECT_FALSE(c.tangency_between);
  EXPECT_FALSE(c.keeps_orientation);
  EXPECT_LT(c.mismatch, 1e-8);
}

TEST(DualIntegral, EllipseExample) {
  const double a = 2, b = 1;
  const DualIntegral G = dualize_integral(ellipse_integral(a, b));
  EXPECT_EQ(G.n, 2);
  const BivariatePoly expect = ellipse_poly(a, b);
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; i + j <= 2; ++j) EXPECT_NEAR(G.F.coeff(i, j), expect.coeff(i, j), 1e-12);
  EXPECT_NEAR(G(1.0, 2.0), expect(1.0, 2.0) / 5.0, 1e-15);
}

TEST(DualIntegral, PowerOfSigma) {
  const DualIntegral G = dualize_integral(homogenize_integral({{4, 0, 0, 1.0}}, 4));
  EXPECT_TRUE(G.F == BivariatePoly::constant(1.0));
  EXPECT_NEAR(G(0.6, 0.8), 1.0, 1e-15);
  EXPECT_NEAR(G(2.0, 0.0), 1.0 / 16, 1e-15);
}

TEST(DualIntegral, VanishesOnGamma) {
  const double a = 2, b = 1;
  const DualIntegral G = dualize_integral(ellipse_integral(a, b));
  const CurveTrace tr = trace_curve(ImplicitCurveModel(ellipse_poly(a, b), {a, 0}), 1e-2);
  for (auto q : tr.points) ASSERT_LT(std::abs(G.F(q.x, q.y)), 1e-10);
}

TEST(DualIntegral, BothSidesConserved) {
  const double a = 2, b = 1;
  const SupportCurve Gamma = make_ellipse(a, b);
  const BilliardTable t = table_from_dual(Gamma);
  const IntegralPoly phi = ellipse_integral(a, b);
  const DualIntegral G = dualize_integral(phi);
  std::vector<AngularState> seeds;
  for (const auto& l : near_tangent_lines(t, 10, 32)) {
    const double v0 = eval_integral(phi, l);
    for (const auto& s : birkhoff_orbit(t, l, 200)) ASSERT_LT(std::abs(eval_integral(phi, s.line) - v0), 1e-8);
    seeds.push_back(AngularState::from_point(dual_of_line(l)));
  }
  EXPECT_LT(invariance_residual(Gamma, [&](PlanePoint q) { return G(q); }, 200, seeds), 1e-8);
}
