#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "heun/cli/commands.hpp"
#include "heun/cli/config.hpp"
#include "heun/cli/report.hpp"
#include "heun/measure.hpp"
#include "support.hpp"

using heun::Complex;
using heun::ErrorCode;
using namespace heun::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("heunspec_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("config values and errors") {
  CHECK(parse_complex("1.5,-2") == Complex(1.5, -2.0));
  CHECK(parse_complex(" 0 , 1e-3 ") == Complex(0.0, 1e-3));
  CHECK(test::throws_code([] { parse_complex("1.5"); }, ErrorCode::InvalidArgument));
  CHECK(test::throws_code([] { parse_complex("a,b"); }, ErrorCode::InvalidArgument));
  const auto p = parse_p("1,0 0,0.5 -2,0");
  CHECK(p.alpha == Complex(1.0));
  CHECK(p.beta == Complex(0.0, 0.5));
  CHECK(p.gamma == Complex(-2.0));
  CHECK(test::throws_code([] { parse_p("1,0 0,0"); }, ErrorCode::InvalidArgument));

  RunConfig cfg;
  apply_setting(cfg, "q_roots", "1,0 -0.5,0.8660254037844386 -0.5,-0.8660254037844386");
  apply_setting(cfg, "n", "12");
  apply_setting(cfg, "ns", "10, 20,40");
  apply_setting(cfg, "overlay", "yes");
  CHECK(cfg.n == 12);
  CHECK(cfg.ns == std::vector<int>{10, 20, 40});
  CHECK(cfg.overlay);
  CHECK(cfg.p_choice().is_lame());
  apply_setting(cfg, "p", "1,0 0,0 0,0");
  CHECK_FALSE(cfg.p_choice().is_lame());
  apply_setting(cfg, "lame", "true");
  CHECK(cfg.p_choice().is_lame());
  CHECK_NOTHROW(cfg.validate());

  CHECK(test::throws_code([&] { apply_setting(cfg, "colour", "red"); }, ErrorCode::InvalidArgument));
  CHECK(test::throws_code([&] { apply_setting(cfg, "n", "12x"); }, ErrorCode::InvalidArgument));
  CHECK(test::throws_code([&] { apply_setting(cfg, "overlay", "maybe"); }, ErrorCode::InvalidArgument));

  RunConfig bad = cfg;
  bad.n = 0;
  CHECK(test::throws_code([&] { bad.validate(); }, ErrorCode::InvalidArgument));
  bad = cfg;
  bad.ns = {50, 25};
  CHECK(test::throws_code([&] { bad.validate(); }, ErrorCode::InvalidArgument));
  bad = cfg;
  bad.roots = {Complex(0.0), Complex(1.0), Complex(1.0)};
  CHECK(test::throws_code([&] { bad.validate(); }, ErrorCode::DuplicateRoot));
}

TEST_CASE("config file and echo round trip") {
  const fs::path dir = scratch_dir("config");
  {
    std::ofstream f(dir / "run.cfg");
    f << "# reference cubic\n\nq_roots = 0,0 1,0 -0.5,1\nn = 7\n  tol=1e-10\nout = " << (dir / "o").string()
      << "\n";
  }
  RunConfig cfg;
  apply_config_file(cfg, (dir / "run.cfg").string());
  CHECK(cfg.n == 7);
  CHECK(cfg.tol == 1e-10);
  CHECK(cfg.roots[2] == Complex(-0.5, 1.0));

  // describe() emits the same syntax the file accepts.
  RunConfig again;
  for (const auto& [k, v] : cfg.describe()) apply_setting(again, k, v);
  CHECK(again.describe() == cfg.describe());

  {
    std::ofstream f(dir / "broken.cfg");
    f << "n 7\n";
  }
  CHECK(test::throws_code([&] { apply_config_file(cfg, (dir / "broken.cfg").string()); },
                          ErrorCode::InvalidArgument));
  CHECK(test::throws_code([&] { apply_config_file(cfg, (dir / "missing.cfg").string()); },
                          ErrorCode::InvalidArgument));
}

TEST_CASE("report serialization round trip") {
  Report r;
  r.command = "demo";
  r.config = RunConfig{}.describe();
  r.versions = version_info();
  r.check_less("tiny", 1.2345678901234567e-13, 1e-8);
  r.check_greater("control", 0.5, 1e-3);
  r.check_at_least("fraction", 0.95, 0.95);
  r.info("nan_value", std::numeric_limits<double>::quiet_NaN());
  r.info("inf_value", std::numeric_limits<double>::infinity());
  r.info("neg_inf", -std::numeric_limits<double>::infinity());
  r.warnings.push_back("quote \" and backslash \\ survive");
  CHECK(r.passed());

  const Report back = report_from_json_text(to_json_text(r));
  CHECK(back.find("nan_value") != nullptr);
  CHECK(std::isnan(back.find("nan_value")->value));
  CHECK(back.find("neg_inf")->value == -std::numeric_limits<double>::infinity());
  CHECK(back.find("tiny")->value == r.find("tiny")->value);
  CHECK(back.warnings == r.warnings);
  CHECK(back.config == r.config);
  CHECK(back == r);
  CHECK(to_json_text(back) == to_json_text(r));

  r.check_less("broken", 2.0, 1.0);
  CHECK_FALSE(r.passed());
  CHECK(summary_text(r).find("FAIL broken") != std::string::npos);

  Report outer;
  outer.command = "all";
  outer.absorb(r);
  CHECK(outer.find("demo.tiny") != nullptr);
  CHECK_FALSE(outer.passed());

  CHECK(test::throws_code([] { report_from_json_text("{\"command\": "); }, ErrorCode::InvalidArgument));
  CHECK(test::throws_code([] { run_command("plot", RunConfig{}); }, ErrorCode::InvalidArgument));
}

TEST_CASE("spectral command: degree one closed form") {
  const fs::path dir = scratch_dir("spectral1");
  RunConfig cfg;
  cfg.roots = {Complex(0.0), Complex(0.5), Complex(-0.5)};
  cfg.n = 1;
  cfg.out = dir.string();
  const Report r = cmd_spectral(cfg);
  CHECK(r.passed());
  const auto rows = lines_of(dir / "spectral_roots.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "re,im,multiplicity,residual");
  std::vector<double> re;
  for (std::size_t k = 1; k < rows.size(); ++k) re.push_back(std::stod(rows[k].substr(0, rows[k].find(','))));
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(-1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-12));
  CHECK(re[1] == doctest::Approx(1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-12));
  CHECK(fs::exists(dir / "spectral_roots.svg"));
  CHECK(report_from_json_text(slurp(dir / "spectral_report.json")) == r);
}

TEST_CASE("identical configurations give byte-identical CSV") {
  for (const std::string cmd : {"spectral", "verify-ode", "special", "takemura"}) {
    RunConfig cfg;
    cfg.n = 10;
    cfg.points = 5;
    cfg.out = scratch_dir("det_a").string();
    run_command(cmd, cfg);
    const fs::path b = scratch_dir("det_b");
    RunConfig cfg2 = cfg;
    cfg2.out = b.string();
    run_command(cmd, cfg2);
    int csvs = 0;
    for (const auto& entry : fs::directory_iterator(cfg.out)) {
      if (entry.path().extension() != ".csv") continue;
      ++csvs;
      CHECK_MESSAGE(slurp(entry.path()) == slurp(b / entry.path().filename()),
                    cmd << ": " << entry.path().filename().string());
    }
    CHECK(csvs > 0);
  }
}

TEST_CASE("exterior points and the derivative choice of P") {
  const heun::CubicConfig c(0.0, 1.0, Complex(-0.5, 1.0));
  const auto pts = exterior_points(c, 40);
  CHECK(pts.size() == 40);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto sc = heun::shift_to_root(c, i);
    const heun::SupportRegion region{heun::LimitProfile(sc)};
    for (const Complex z : pts) CHECK(region.outside(z - sc.shift, 0.1));
  }
  const auto sym = exterior_points(heun::CubicConfig(0.0, 0.5, -0.5), 8);
  for (const Complex z : sym) CHECK(std::abs(z) > 0.5);
  CHECK(test::throws_code([&] { exterior_points(c, 0); }, ErrorCode::InvalidArgument));

  const auto dq = derivative_poly(c);
  const auto q = [&](Complex z) { return (z - c.roots()[0]) * (z - c.roots()[1]) * (z - c.roots()[2]); };
  for (const Complex z : {Complex(0.3, 0.2), Complex(-2.0, 1.0)}) {
    const Complex fd = (q(z + 1e-6) - q(z - 1e-6)) / 2e-6;
    CHECK(std::abs(dq(z) - c.leading() * fd) < 1e-8);
  }
}
