#include "adfric/scenarios.hpp"

#include <cmath>

namespace adfric {

ScenarioResult run_cylinders(const ScenarioConfig& cfg) {
  CylindersSetup setup = build_cylinders(cfg, -cfg.cyl_radius);
  Model& model = setup.model;
  ScenarioResult result;
  result.W_adh = model.pairs[0].params.adhesion.W_adh;
  result.T_max = model.pairs[0].params.adhesion.T_max;

  const double travel = 2.0 * setup.R;
  const int n_steps = std::max(1, static_cast<int>(std::lround(travel / cfg.step)));
  std::vector<double> stations(n_steps + 1);
  for (int i = 0; i <= n_steps; ++i) stations[i] = static_cast<double>(i) / n_steps;

  bool profile_taken = false;
  Observer obs = [&](const Model& m, const StepContext& ctx) {
    StepSample s;
    s.t = ctx.t;
    s.u = travel * ctx.t;
    // total contact force applied to the lower body (pass 0 integrates over it)
    const Vec2 f = m.applied_contact_force(0, 0);
    s.Fx = f.x();
    s.Fy = f.y();
    const ContactMeasures cm = measure_contact(m, 0, 0.0);
    s.L_c = cm.L_c;
    s.n_contact = cm.n_contact;
    s.n_stick = cm.n_stick;
    s.n_slide = cm.n_slide;
    s.full_sliding = cm.full_sliding;
    const double gp = 1.0 / std::sqrt(3.0);
    s.corner_syy = cauchy_stress(m.mesh, setup.corner_elem, m.material, m.u,
                                 -gp, -gp)(1, 1);
    result.series.push_back(s);

    if (!profile_taken && s.u >= 0.5 * setup.R) {
      profile_taken = true;
      // normal-stress profile along the base of the lower body
      const int nx = static_cast<int>(setup.base_profile_nodes.size()) - 1;
      for (int i = 0; i <= nx; ++i) {
        const int node = setup.base_profile_nodes[i];
        const int elem = std::min(i, nx - 1); // base row elements are 0..nx-1
        const double xi = (i < nx ? -1.0 : 1.0) * gp;
        const double syy =
            cauchy_stress(m.mesh, elem, m.material, m.u, xi, -gp)(1, 1);
        result.base_profile.push_back({m.mesh.nodes[node].x(), syy});
      }
    }
    return true;
  };

  Solver solver(model, cfg.make_solver_config());
  result.report = solver.run(stations, obs);
  if (!result.report.completed) result.detached = true;
  if (!result.series.empty()) result.last_L_c = result.series.back().L_c;
  write_outputs(cfg, result);
  return result;
}

} // namespace adfric
