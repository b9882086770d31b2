#include "adfric/scenarios.hpp"

#include <cmath>
#include <filesystem>

namespace adfric {

ScenarioResult run_strip(const ScenarioConfig& cfg) {
  StripSetup setup = build_strip(cfg);
  Model& model = setup.model;
  ScenarioResult result;
  result.W_adh = model.pairs[0].params.adhesion.W_adh;
  result.T_max = model.pairs[0].params.adhesion.T_max;

  const int n_steps = std::max(1, static_cast<int>(std::lround(cfg.u_max / cfg.step)));
  std::vector<double> stations(n_steps + 1);
  for (int i = 0; i <= n_steps; ++i) stations[i] = static_cast<double>(i) / n_steps;

  const int dof_x = 2 * setup.pull_node;
  const int dof_y = dof_x + 1;
  int qp_step = 0;

  Observer obs = [&](const Model& m, const StepContext& ctx) {
    StepSample s;
    s.t = ctx.t;
    s.u = m.u[dof_y];
    s.Fx = (*ctx.residual)[dof_x];
    s.Fy = (*ctx.residual)[dof_y];
    s.Pi_ext = ctx.external_work;
    s.Pi_int = m.strain_energy();
    const ContactMeasures cm = measure_contact(m, 0, setup.length);
    s.L_c = cm.L_c;
    s.L_peel = cm.L_peel;
    s.L_slide = setup.length - cm.L_stick;
    s.n_contact = cm.n_contact;
    s.n_stick = cm.n_stick;
    s.n_slide = cm.n_slide;
    s.full_sliding = cm.full_sliding;
    result.series.push_back(s);
    if (cfg.dump_qp && !cfg.out_dir.empty()) {
      std::filesystem::create_directories(cfg.out_dir + "/qp");
      dump_quadrature_points(m, cfg.out_dir + "/qp/step_" +
                                    std::to_string(qp_step++) + ".csv");
    }
    return true;
  };

  {
    StepSample s0;
    const ContactMeasures cm = measure_contact(model, 0, setup.length);
    s0.L_c = cm.L_c;
    s0.L_slide = setup.length - cm.L_stick;
    s0.n_contact = cm.n_contact;
    s0.n_stick = cm.n_stick;
    result.series.push_back(s0);
  }

  Solver solver(model, cfg.make_solver_config());
  result.report = solver.run(stations, obs);
  if (!result.report.completed) result.detached = true;
  if (!result.series.empty()) result.last_L_c = result.series.back().L_c;

  result.gamma_curve = fracture_energy_curve(result.series);
  // steady-state window (mid-trajectory): L_peel in [2/15, 6/15] of the length
  const double lo = setup.length * 2.0 / 15.0, hi = setup.length * 6.0 / 15.0;
  double sum = 0.0, sum2 = 0.0;
  int n = 0;
  for (const auto& g : result.gamma_curve)
    if (g[0] >= lo && g[0] <= hi) {
      sum += g[1];
      sum2 += g[1] * g[1];
      ++n;
    }
  if (n > 1) {
    result.gamma_mean = sum / n;
    const double var = std::max(0.0, sum2 / n - result.gamma_mean * result.gamma_mean);
    result.gamma_rel_std = std::sqrt(var) / std::abs(result.gamma_mean);
  }
  write_outputs(cfg, result);
  return result;
}

} // namespace adfric
