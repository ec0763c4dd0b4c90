#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "angbill/angbill.hpp"
#include "angbill/io.hpp"

namespace angbill::cli {

using io::json;
using io::num;

/// Failure inside a named stage of a subcommand.
struct StageError {
  std::string stage;
  std::string message;
};

template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw StageError{name, e.what()};
  } catch (const std::exception& e) {
    throw StageError{name, e.what()};
  }
}

inline std::vector<double> parse_pair(const std::string& s, const char* what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      v.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw CLI::ValidationError(what, "expected two comma-separated numbers");
    }
  }
  if (v.size() != 2) throw CLI::ValidationError(what, "expected two comma-separated numbers");
  return v;
}

/// Near-tangent positive lines of the table, reproducible from `seed`.
inline std::vector<OrientedLine> sample_lines(const BilliardTable& table, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi), frac(0.9, 0.99);
  std::vector<OrientedLine> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double phi = ang(rng);
    out.emplace_back(phi, frac(rng) * table.support(phi).v);
  }
  return out;
}

struct Args {
  std::string system = "angular", curve, start, out, integral, f, g1, seed, in;
  std::size_t steps = 100;
  int k = 1;
  double p = 1.0;
  double trace_step = 1e-3;
};

inline PlanePoint seed_or_radial(const BivariatePoly& f, const std::string& s) {
  if (s.empty()) return radial_seed(f);
  const auto v = parse_pair(s, "--seed");
  return {v[0], v[1]};
}

inline int cmd_orbit(const Args& a, std::ostream& out) {
  const SupportCurve curve = stage("load curve", [&] { return io::parse_curve(io::read_json_file(a.curve)); });
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw StageError{"write output", "cannot open " + a.out};
  }
  std::ostream& os = a.out.empty() ? out : file;
  const auto st = parse_pair(a.start, "--start");
  if (a.system == "angular") {
    const PlanePoint A = PlanePoint{st[0], st[1]} - curve.origin();
    const AngularOrbit orb = stage("angular orbit", [&] { return orbit(curve, AngularState::from_point(A), a.steps); });
    io::write_angular_csv(os, curve, orb);
  } else {
    std::optional<IntegralPoly> phi;
    if (!a.integral.empty())
      phi = stage("load integral", [&] { return io::parse_integral(io::read_json_file(a.integral)); });
    const BilliardTable table = table_from_dual(curve);
    const auto orb = stage("birkhoff orbit", [&] { return birkhoff_orbit(table, OrientedLine(st[0], st[1]), a.steps); });
    io::write_birkhoff_csv(os, orb, phi);
  }
  return 0;
}

inline int cmd_dual_check(const Args& a, std::ostream& out) {
  const SupportCurve curve = stage("load curve", [&] { return io::parse_curve(io::read_json_file(a.curve)); });
  const BilliardTable table = table_from_dual(curve);
  double worst = 0.0, worst_neg = 0.0;
  for (const OrientedLine& l : sample_lines(table, 20, 7)) {
    const auto orb = stage("birkhoff orbit", [&] { return birkhoff_orbit(table, l, a.steps); });
    worst = std::max(worst, stage("compare", [&] { return dual_orbit_deviation(curve, orb); }));
    // Reversed line: negative orientation, compared backwards.
    const auto neg = stage("birkhoff orbit", [&] { return birkhoff_orbit(table, l.reversed(), a.steps); });
    worst_neg = std::max(worst_neg, stage("compare", [&] { return dual_orbit_deviation(curve, neg); }));
  }
  out << "lines 20\nsteps " << a.steps << "\nmax_deviation_positive " << num(worst) << "\nmax_deviation_negative "
      << num(worst_neg) << "\nmax_deviation " << num(std::max(worst, worst_neg)) << '\n';
  return 0;
}

inline int cmd_twist(const Args& a, std::ostream& out) {
  const SupportCurve curve = stage("load curve", [&] { return io::parse_curve(io::read_json_file(a.curve)); });
  const auto phis = uniform_grid(0.0, kTwoPi, 256, false);
  const auto deltas = uniform_grid(1e-3, kPi - 1e-3, 128);
  const TwistProfile t = stage("twist", [&] { return twist_profile(curve, phis, deltas); });
  out << "grid 256x128\ndelta_range " << num(1e-3) << ' ' << num(kPi - 1e-3) << "\nmin_twist " << num(t.min_value)
      << "\nmax_fd_rel_err " << num(t.max_fd_rel_err) << "\ntwist_positive " << (t.min_value > 0 ? "yes" : "no")
      << '\n';
  return 0;
}

inline int cmd_integral_check(const Args& a, std::ostream& out) {
  const SupportCurve curve = stage("load curve", [&] { return io::parse_curve(io::read_json_file(a.curve)); });
  const IntegralPoly phi = stage("load integral", [&] { return io::parse_integral(io::read_json_file(a.integral)); });
  const BilliardTable table = table_from_dual(curve);
  const DualIntegral G = stage("dualize integral", [&] { return dualize_integral(phi); });
  const auto lines = sample_lines(table, 20, 11);
  double birk = 0.0;
  std::vector<AngularState> seeds;
  for (const auto& l : lines) {
    const auto orb = stage("birkhoff orbit", [&] { return birkhoff_orbit(table, l, a.steps); });
    const double v0 = eval_integral(phi, l);
    for (const auto& s : orb) birk = std::max(birk, std::abs(eval_integral(phi, s.line) - v0) / (1.0 + std::abs(v0)));
    seeds.push_back(AngularState::from_point(dual_of_line(l)));
  }
  const double ang = stage("angular orbit", [&] {
    return invariance_residual(curve, [&](PlanePoint q) { return G(q); }, a.steps, seeds);
  });
  out << "seeds 20\nsteps " << a.steps << "\nbirkhoff_drift " << num(birk) << "\nangular_drift " << num(ang)
      << "\ntangential_max " << num(tangential_values(phi, table)) << '\n';
  return 0;
}

inline CurveTrace trace_for(const BivariatePoly& f, const std::string& seed, double step) {
  const PlanePoint s = stage("seed", [&] { return seed_or_radial(f, seed); });
  return stage("trace", [&] { return trace_curve(ImplicitCurveModel(f, s), step); });
}

inline int cmd_identity(const Args& a, std::ostream& out) {
  const BivariatePoly f = stage("load f", [&] { return io::parse_poly(io::read_json_file(a.f)); });
  const BivariatePoly g1 = a.g1.empty() ? BivariatePoly::constant(1.0)
                                        : stage("load g1", [&] { return io::parse_poly(io::read_json_file(a.g1)); });
  const IntegralData data = stage("integral data", [&] { return make_integral_data(f, g1, a.k, a.p); });
  const CurveTrace tr = trace_for(f, a.seed, a.trace_step);
  double e1 = 0.0;
  const std::size_t stride = std::max<std::size_t>(1, tr.size() / 64);
  for (std::size_t i = 0; i < tr.size(); i += stride)
    e1 = std::max(e1, lemma_e1_residual(data, tr.points[i], 1e-3));
  const auto e2 = stage("remarkable identity", [&] { return remarkable_identity(data, tr); });
  const auto e4 = stage("e4 constancy", [&] { return e4_constancy_check(data, tr); });
  json j{{"trace_points", tr.size()},
         {"e1", {{"epsilon", 1e-3}, {"max_residual", e1}}},
         {"e2", {{"c1", e2.value}, {"spread", e2.spread}}},
         {"e4", {{"c", e4.value}, {"spread", e4.spread}}}};
  out << j.dump(2) << '\n';
  return 0;
}

inline int cmd_certify(const Args& a, std::ostream& out) {
  const BivariatePoly f = stage("load f", [&] { return io::parse_poly(io::read_json_file(a.f)); });
  const CurveTrace tr = trace_for(f, a.seed, a.trace_step);
  const Certificate c = stage("certify", [&] { return certify(f, tr); });
  out << io::certificate_to_json(c).dump(2) << '\n';
  return 0;
}

inline int cmd_normalform(const Args& a, std::ostream& out) {
  const SupportCurve curve = stage("load curve", [&] { return io::parse_curve(io::read_json_file(a.curve)); });
  out << "phi,A,B\n";
  for (double t : uniform_grid(0.0, kTwoPi, 16, false))
    out << num(t) << ',' << num(coeff_A(curve, t)) << ',' << num(coeff_B(curve, t)) << '\n';
  const double phi = 0.7;
  const double slope = stage("z expansion", [&] { return z_expansion_slope(curve, phi); });
  const LazutkinOrders lo = stage("lazutkin step", [&] { return lazutkin_orders(curve, phi); });
  out << "\nz_expansion_slope " << num(slope) << '\n';
  for (std::size_t i = 0; i < lo.ratio1.size(); ++i)
    out << "lazutkin_ratio v=" << num(lo.v[i]) << " r1 " << num(lo.ratio1[i]) << " r2 " << num(lo.ratio2[i]) << '\n';
  return 0;
}

inline int cmd_render(const Args& a, std::ostream&) {
  std::ifstream in(a.in);
  if (!in) throw StageError{"read input", "cannot open " + a.in};
  std::vector<io::SvgLayer> layers;
  if (!a.curve.empty()) {
    const SupportCurve curve = stage("load curve", [&] { return io::parse_curve(io::read_json_file(a.curve)); });
    const PlanePoint o = curve.origin();
    const auto grid = uniform_grid(0.0, kTwoPi, 720, false);
    io::SvgLayer g{{}, "#1f4e9a", true, true};
    for (double t : grid) g.points.push_back(o + curve_point(curve, t));
    layers.push_back(g);
    io::SvgLayer s{{}, "#c0392b", false, false}, p{{}, "#27ae60", false, false};
    for (auto q : s_curve_sample(curve, grid)) s.points.push_back(o + q);
    for (auto q : p_curve_sample(curve, grid)) p.points.push_back(o + q);
    // S and P reach far out near the flat directions; clip to a window around Gamma.
    double R = 0;
    for (auto q : g.points) R = std::max(R, norm(q));
    for (auto* l : {&s, &p}) {
      std::erase_if(l->points, [&](PlanePoint q) { return norm(q) > 4 * R; });
      layers.push_back(*l);
    }
  }
  layers.push_back({stage("read orbit", [&] { return io::read_orbit_points(in); }), "#333333", false, false});
  std::ofstream os(a.out);
  if (!os) throw StageError{"write output", "cannot open " + a.out};
  os << io::render_svg(layers);
  return 0;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"angular and Birkhoff billiards: orbits, duality checks, integrability certificates"};
  app.require_subcommand(1);
  Args a;

  auto* orbit = app.add_subcommand("orbit", "iterate a map and write the orbit as CSV");
  orbit->add_option("--system", a.system)->check(CLI::IsMember({"angular", "birkhoff"}));
  orbit->add_option("--curve", a.curve, "curve JSON (Gamma)")->required();
  orbit->add_option("--start", a.start, "x,y for angular; phi,p for birkhoff")->required();
  orbit->add_option("--steps", a.steps)->check(CLI::PositiveNumber);
  orbit->add_option("--out", a.out, "CSV path (stdout if absent)");
  orbit->add_option("--integral", a.integral, "integral JSON, fills integral_value");

  auto* dual = app.add_subcommand("dual-check", "compare dualized Birkhoff orbits with angular orbits");
  dual->add_option("--curve", a.curve)->required();
  dual->add_option("--steps", a.steps)->check(CLI::PositiveNumber);

  auto* twist = app.add_subcommand("twist", "minimum twist over a grid");
  twist->add_option("--curve", a.curve)->required();

  auto* ic = app.add_subcommand("integral-check", "drift of an integral and its dual along orbits");
  ic->add_option("--curve", a.curve)->required();
  ic->add_option("--integral", a.integral)->required();
  ic->add_option("--steps", a.steps)->check(CLI::PositiveNumber);

  auto* id = app.add_subcommand("identity", "residuals of the on-curve identities");
  id->add_option("--f", a.f)->required();
  id->add_option("--g1", a.g1);
  id->add_option("--k", a.k)->check(CLI::PositiveNumber);
  id->add_option("--p", a.p)->check(CLI::PositiveNumber);
  id->add_option("--seed", a.seed, "x,y on the curve");
  id->add_option("--trace-step", a.trace_step)->check(CLI::PositiveNumber);

  auto* cert = app.add_subcommand("certify", "non-integrability certificate as JSON");
  cert->add_option("--f", a.f)->required();
  cert->add_option("--seed", a.seed, "x,y on the curve");
  cert->add_option("--trace-step", a.trace_step)->check(CLI::PositiveNumber);

  auto* nf = app.add_subcommand("normalform", "A, B tables and expansion orders");
  nf->add_option("--curve", a.curve)->required();

  auto* render = app.add_subcommand("render", "SVG phase portrait of an orbit CSV");
  render->add_option("--in", a.in)->required();
  render->add_option("--out", a.out)->required();
  render->add_option("--curve", a.curve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (orbit->parsed()) return cmd_orbit(a, out);
    if (dual->parsed()) return cmd_dual_check(a, out);
    if (twist->parsed()) return cmd_twist(a, out);
    if (ic->parsed()) return cmd_integral_check(a, out);
    if (id->parsed()) return cmd_identity(a, out);
    if (cert->parsed()) return cmd_certify(a, out);
    if (nf->parsed()) return cmd_normalform(a, out);
    if (render->parsed()) return cmd_render(a, out);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const StageError& e) {
    err << "error in stage '" << e.stage << "': " << e.message << '\n';
    return 1;
  }
  return 2;
}

}  // namespace angbill::cli
