#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "heun/cli/commands.hpp"
#include "heun/error.hpp"

int main(int argc, char** argv) {
  using namespace heun::cli;
  CLI::App app{"heunspec: spectral polynomials, averaged measures and root trees of Heun equations"};
  app.set_version_flag("--version", HEUNSPEC_VERSION);

  std::string command;
  app.add_option("command", command, "spectral | ellipse | verify-ode | special | takemura | balayage | all")
      ->required()
      ->check(CLI::IsMember(command_names()));

  std::string config_file;
  std::vector<std::string> q_roots;
  std::string p, out, tol, step, n, threads, seed, s_min, s_max, samples, points, ns;
  bool lame = false, overlay = false;
  app.add_option("--config", config_file, "flat key=value configuration file");
  app.add_option("--q-roots", q_roots, "three roots of Q, each as re,im")->expected(3);
  auto* p_opt = app.add_option("--p", p, "P = alpha z^2 + beta z + gamma as \"a,b a,b a,b\"");
  auto* lame_opt = app.add_flag("--lame", lame, "use P = Q'/2 (default)");
  p_opt->excludes(lame_opt);
  app.add_option("--n", n, "degree of the polynomial solutions");
  app.add_option("--tol", tol, "root-finder stopping tolerance");
  app.add_option("--step", step, "arc step for tree tracing (0 = automatic)");
  app.add_option("--out", out, "output directory");
  app.add_option("--threads", threads, "worker threads for root finding");
  app.add_option("--seed", seed, "seed for deterministic perturbations");
  app.add_option("--s-min", s_min, "special: left end of the s interval");
  app.add_option("--s-max", s_max, "special: right end of the s interval");
  app.add_option("--samples", samples, "special: number of sample points");
  app.add_option("--points", points, "balayage: number of exterior points");
  app.add_option("--ns", ns, "balayage: increasing degrees, comma separated");
  app.add_flag("--overlay", overlay, "takemura: overlay the spectral roots of degree n");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg;
    if (!config_file.empty()) apply_config_file(cfg, config_file);
    auto set = [&](const char* key, const std::string& value) {
      if (!value.empty()) apply_setting(cfg, key, value);
    };
    if (!q_roots.empty()) {
      apply_setting(cfg, "q_roots", q_roots[0] + " " + q_roots[1] + " " + q_roots[2]);
    }
    set("p", p);
    if (lame) apply_setting(cfg, "lame", "true");
    set("n", n);
    set("tol", tol);
    set("step", step);
    set("out", out);
    set("threads", threads);
    set("seed", seed);
    set("s_min", s_min);
    set("s_max", s_max);
    set("samples", samples);
    set("points", points);
    set("ns", ns);
    if (overlay) apply_setting(cfg, "overlay", "true");
    cfg.validate();

    const Report report = run_command(command, cfg);
    std::cout << summary_text(report);
    std::cout << "heunspec " << command << ": " << (report.passed() ? "PASS" : "FAIL") << "\n";
    return report.passed() ? 0 : 1;
  } catch (const heun::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
