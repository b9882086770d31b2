#include "adfric/scenarios.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <random>

namespace {

using namespace adfric;

int run_scenario(ScenarioConfig cfg) {
  switch (cfg.scenario) {
    case ScenarioId::strip: {
      const ScenarioResult r = run_strip(cfg);
      if (!r.report.completed && r.report.failed_step >= 0) {
        std::printf("solver stopped early: %s\n", r.report.failure.c_str());
        return 2;
      }
      std::printf("strip: %zu steps, Gamma* = %.6g (W_adh = %.6g)\n",
                  r.series.size(), r.gamma_mean, r.W_adh);
      return 0;
    }
    case ScenarioId::cylinders: {
      const ScenarioResult r = run_cylinders(cfg);
      if (!r.report.completed) {
        std::printf("solver stopped early: %s\n", r.report.failure.c_str());
        return 2;
      }
      std::printf("cylinders: %zu steps\n", r.series.size());
      return 0;
    }
    case ScenarioId::cap: {
      const CapSuiteResult suite = run_cap_suite(cfg);
      write_suite_outputs(cfg, suite);
      bool any_failed = false;
      for (std::size_t i = 0; i < suite.runs.size(); ++i) {
        const auto& r = suite.runs[i];
        std::printf("cap F_n = %+.4g: L_c0 = %.4g, xi = %.4g, eta = %.4g%s\n",
                    suite.loads[i], r.quad.L_c0, r.quad.xi, r.eta.exponent,
                    r.detached ? " [detached]" : "");
        any_failed = any_failed || (r.detached && !r.quad.ok);
      }
      if (suite.beta.ok) std::printf("beta = %.4g\n", suite.beta.exponent);
      return any_failed ? 2 : 0;
    }
  }
  return 1;
}

int verify_tangents_cmd(const ScenarioConfig& cfg) {
  // verify on a coarsened model in a lightly loaded state
  ScenarioConfig small = cfg;
  small.resolution_scale = std::min(small.resolution_scale, 0.15);
  Model* model = nullptr;
  StripSetup strip;
  CylindersSetup cyl;
  CapSetup cap;
  switch (cfg.scenario) {
    case ScenarioId::strip:
      strip = build_strip(small);
      model = &strip.model;
      break;
    case ScenarioId::cylinders:
      cyl = build_cylinders(small, -0.1 * small.cyl_radius);
      model = &cyl.model;
      break;
    case ScenarioId::cap:
      cap = build_cap(small, small.cap_loads.empty() ? 1.0 : small.cap_loads[0], 0.5);
      model = &cap.model;
      break;
  }
  Solver solver(*model);
  solver.run({0.0, 0.05, 0.1});
  const double err = verify_tangent(*model);
  std::printf("tangent vs central FD, relative Frobenius error: %.3e\n", err);
  return err <= 1e-5 ? 0 : 2;
}

int selftest() {
  int failures = 0;
  auto check = [&](bool ok, const char* what) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what);
    if (!ok) ++failures;
  };

  const AdhesionParams p = AdhesionParams::from_hamaker(0.05, 0.4);
  check(std::abs(normal_traction(p.g_eq, p)) < 1e-15, "traction vanishes at g_eq");
  check(std::abs(normal_traction(p.g_max, p) + p.T_max) < 1e-15 * p.T_max,
        "traction reaches -T_max at g_max");
  const MicroParams mp = params_from_macroscopic(p.T_max, p.W_adh);
  check(std::abs(mp.A_H - 0.05) < 1e-12 && std::abs(mp.r0 - 0.4) < 1e-12,
        "macroscopic round-trip");

  const LawDI di{1.0, p.g_max, 80.0 / p.r0};
  check(std::abs(slide_threshold_DI(p.g_max, di) - 0.5) < 1e-12,
        "DI threshold at the cutoff is tau/2");

  // radial return on a flat rigid line
  RigidLine line(Vec2(0, 0), Vec2(1, 0), -10, 10);
  auto proj = line.project(Vec2(0.3, 0.2));
  ContactPointState st;
  st.xi_s = 0.0;
  st.has_anchor = true;
  const Vec2 trial = trial_traction(st, line, *proj, 100.0);
  const TangentialUpdate upd = return_map(st, *proj, trial, 10.0, 100.0);
  check(upd.sliding && std::abs(upd.t_t.norm() - 10.0) < 1e-12,
        "return map lands on the slide sphere");

  // one-element patch equilibrium
  Mesh mesh = make_rectangle_mesh(0, 0, 1, 1, 1, 1, ElemType::Q1);
  Material m;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(8);
  Eigen::VectorXd f;
  Eigen::MatrixXd K;
  element_force_and_stiffness(mesh, 0, m, u, f, K);
  check(f.norm() < 1e-14, "stress-free reference element");

  std::printf("%s\n", failures == 0 ? "selftest OK" : "selftest FAILED");
  return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-strain FE contact engine for coupled adhesion and friction"};
  app.require_subcommand(1);

  std::string config_path, out_dir, law_override;
  double resolution_scale = 0.0;
  int seed = -1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "JSON scenario configuration")->required();
    cmd->add_option("--config", config_path, "JSON scenario configuration");
    cmd->add_option("--out", out_dir, "output directory override");
    cmd->add_option("--resolution-scale", resolution_scale, "mesh resolution factor");
    cmd->add_option("--law", law_override, "law override: di|ea|frictionless|nonadhesive-di");
    cmd->add_option("--seed", seed, "seed for mesh perturbation tests");
  };

  CLI::App* cmd_run = app.add_subcommand("run", "run a scenario");
  add_common(cmd_run);
  CLI::App* cmd_verify = app.add_subcommand("verify-tangents",
                                            "check the contact tangents against FD");
  add_common(cmd_verify);
  app.add_subcommand("selftest", "run the built-in smoke checks");

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand("selftest")) return selftest();

  ScenarioConfig cfg;
  try {
    cfg = adfric::load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (resolution_scale > 0.0) cfg.resolution_scale = resolution_scale;
    if (seed >= 0) cfg.seed = seed;
    if (!law_override.empty()) {
      if (law_override == "di")
        cfg.law = LawChoice::di;
      else if (law_override == "ea")
        cfg.law = LawChoice::ea;
      else if (law_override == "frictionless")
        cfg.law = LawChoice::frictionless;
      else if (law_override == "nonadhesive-di")
        cfg.law = LawChoice::nonadhesive_di;
      else
        throw std::invalid_argument("config: unknown law '" + law_override + "'");
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  }

  try {
    if (app.got_subcommand("run")) return run_scenario(cfg);
    if (app.got_subcommand("verify-tangents")) return verify_tangents_cmd(cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
