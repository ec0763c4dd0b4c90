#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"

using namespace angbill;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "angbill_cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return std::string(SAMPLES_DIR) + "/" + name; }

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("angbill_test_" + name); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Json, CurveKinds) {
  using io::json;
  EXPECT_NEAR(io::parse_curve(json::parse(R"({"kind":"ellipse","a":2,"b":1})")).r(0), 2.0, 1e-15);
  EXPECT_NEAR(io::parse_curve(json::parse(R"({"kind":"offset_circle","R":1,"x0":0.5})")).r(0), 0.5, 1e-15);
  EXPECT_NEAR(io::parse_curve(json::parse(R"({"kind":"trig_poly","c0":2})")).r(1.0), 0.5, 1e-15);
  const SupportCurve imp =
      io::parse_curve(json::parse(R"({"kind":"implicit","poly":[[2,0,1],[0,2,1],[0,0,-4]]})"));
  EXPECT_NEAR(imp.r(0.3), 2.0, 1e-13);
  EXPECT_THROW(io::parse_curve(json::parse(R"({"kind":"spiral"})")), Error);
  EXPECT_THROW(io::parse_curve(json::parse(R"({"kind":"ellipse","a":2})")), Error);
}

TEST(Json, PolynomialLiteralRoundtrip) {
  const BivariatePoly f = io::parse_poly(io::json::parse("[[4,0,1],[0,4,1],[0,0,-1]]"));
  EXPECT_TRUE(f == testing_support::fermat4());
  EXPECT_TRUE(io::parse_poly(io::poly_to_json(f)) == f);
}

TEST(Json, IntegralHomogenisedOnLoad) {
  const IntegralPoly phi = io::parse_integral(io::json::parse(R"({"terms":[[0,2,0,1],[0,0,0,1]],"degree":2})"));
  EXPECT_EQ(phi.poly().coeff(0, 2), 2.0);
}

TEST(Csv, AngularColumnsAndPrecision) {
  const SupportCurve c = make_ellipse(2, 1);
  std::ostringstream os;
  io::write_angular_csv(os, c, orbit(c, {0.3, 3.0}, 3));
  std::istringstream is(os.str());
  std::string head, row;
  std::getline(is, head);
  EXPECT_EQ(head, "step,x,y,phi,r,phibar,delta,case");
  std::getline(is, row);
  EXPECT_NE(row.find("0.29999999999999999"), std::string::npos);  // 17 significant digits
  std::istringstream again(os.str());
  EXPECT_EQ(io::read_orbit_points(again).size(), 4u);
}

TEST(Csv, BirkhoffColumns) {
  const BilliardTable t(make_ellipse(2, 1));
  std::ostringstream os;
  io::write_birkhoff_csv(os, birkhoff_orbit(t, {0.2, 0.4}, 2), std::nullopt);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "step,phi,p,hit_x,hit_y,integral_value");
}

TEST(Cli, CertifyFermat) {
  const CliResult r = run_cli({"certify", "--f", sample("fermat4.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::json::parse(r.out);
  EXPECT_EQ(j["verdict"], "NOT_POLY_INTEGRABLE");
  EXPECT_EQ(j["witnesses"].size(), 4u);
  EXPECT_TRUE(j.contains("tolerances"));
}

TEST(Cli, IntegralCheckEllipse) {
  const CliResult r = run_cli({"integral-check", "--curve", sample("ellipse.json"), "--integral",
                         sample("ellipse_integral.json"), "--steps", "500"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream is(r.out);
  std::string key;
  double v;
  int found = 0;
  while (is >> key >> v)
    if (key == "birkhoff_drift" || key == "angular_drift") {
      EXPECT_LT(v, 1e-8) << key;
      ++found;
    }
  EXPECT_EQ(found, 2);
}

TEST(Cli, OrbitFromSCurveFails) {
  const SupportCurve c = make_ellipse(2, 1);
  const PlanePoint S = s_curve_sample(c, {2.0}).at(0);
  const std::string start = io::num(S.x) + "," + io::num(S.y);
  const CliResult r = run_cli({"orbit", "--system", "angular", "--curve", sample("ellipse.json"), "--start", start,
                         "--steps", "5"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("SCurveSingularity"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("at step 0"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("angular orbit"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"bogus"}).code, 2);
  EXPECT_EQ(run_cli({"orbit", "--curve", sample("ellipse.json")}).code, 2);
  EXPECT_EQ(run_cli({"orbit", "--curve", sample("ellipse.json"), "--start", "1"}).code, 2);
  EXPECT_EQ(run_cli({"twist", "--curve", "/nonexistent.json"}).code, 1);
}

TEST(Cli, OrbitOutputIsDeterministicAndRenders) {
  const fs::path a = temp_file("a.csv"), b = temp_file("b.csv"), svg = temp_file("o.svg");
  for (const auto& p : {a, b})
    ASSERT_EQ(run_cli({"orbit", "--system", "birkhoff", "--curve", sample("ellipse.json"), "--start", "0.3,0.5",
                       "--steps", "50", "--integral", sample("ellipse_integral.json"), "--out", p.string()})
                  .code,
              0);
  EXPECT_EQ(slurp(a), slurp(b));
  ASSERT_EQ(run_cli({"render", "--in", a.string(), "--out", svg.string(), "--curve", sample("ellipse.json")}).code, 0);
  const std::string s = slurp(svg);
  EXPECT_NE(s.find("<svg"), std::string::npos);
  EXPECT_NE(s.find("version=\"1.1\""), std::string::npos);
  EXPECT_NE(s.find("<circle"), std::string::npos);
  for (const auto& p : {a, b, svg}) fs::remove(p);
}

TEST(Cli, OtherSubcommands) {
  CliResult r = run_cli({"twist", "--curve", sample("ellipse.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("twist_positive yes"), std::string::npos);
  r = run_cli({"dual-check", "--curve", sample("ellipse.json"), "--steps", "50"});
  EXPECT_EQ(r.code, 0);
  r = run_cli({"normalform", "--curve", sample("ellipse.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("z_expansion_slope"), std::string::npos);
  r = run_cli({"identity", "--f", sample("ellipse_f.json"), "--k", "1", "--p", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::json::parse(r.out);
  EXPECT_NEAR(j["e2"]["c1"].template get<double>(), 2.0, 1e-9);
  EXPECT_NEAR(j["e4"]["c"].template get<double>(), -4.0, 1e-9);
}
