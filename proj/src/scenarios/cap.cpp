#include "adfric/scenarios.hpp"

#include <cmath>
#include <future>

namespace adfric {

namespace {
constexpr double kPreloadFrac = 0.2;
}

ScenarioResult run_cap(const ScenarioConfig& cfg, double F_n) {
  CapSetup setup = build_cap(cfg, F_n, kPreloadFrac);
  Model& model = setup.model;
  ScenarioResult result;
  result.W_adh = model.pairs[0].params.adhesion.W_adh;
  result.T_max = model.pairs[0].params.adhesion.T_max;

  const int n_pre = static_cast<int>(cfg.cap_preload_steps);
  const int n_shear =
      std::max(1, static_cast<int>(std::lround(cfg.cap_shear_umax / cfg.cap_shear_step)));
  std::vector<double> stations;
  for (int i = 0; i <= n_pre; ++i)
    stations.push_back(kPreloadFrac * i / n_pre);
  for (int i = 1; i <= n_shear; ++i)
    stations.push_back(kPreloadFrac + (1.0 - kPreloadFrac) * i / n_shear);

  int beyond_full_sliding = 0;
  Observer obs = [&](const Model& m, const StepContext& ctx) {
    StepSample s;
    s.t = ctx.t;
    s.u = ctx.t <= kPreloadFrac
              ? 0.0
              : cfg.cap_shear_umax * (ctx.t - kPreloadFrac) / (1.0 - kPreloadFrac);
    const Vec2 f = m.applied_contact_force(0, 0);
    s.Fx = f.x();        // driving tangential force on the plate
    s.Fy = -f.y();       // achieved normal force, compressive positive
    s.plate_y = m.rigid_y(0);
    const ContactMeasures cm = measure_contact(m, 0, 0.0);
    s.L_c = cm.L_c;
    s.n_contact = cm.n_contact;
    s.n_stick = cm.n_stick;
    s.n_slide = cm.n_slide;
    s.full_sliding = cm.full_sliding;
    s.Pi_int = m.strain_energy();
    result.series.push_back(s);
    if (s.full_sliding && s.u > 0.0) ++beyond_full_sliding;
    return beyond_full_sliding < 10; // a short tail past full sliding suffices
  };

  Solver solver(model, cfg.make_solver_config());
  result.report = solver.run(stations, obs);
  result.detached = !result.report.completed;
  if (!result.series.empty()) result.last_L_c = result.series.back().L_c;

  // fits over the shear phase, before full sliding
  std::vector<double> Ft, Lc, reduction;
  double L_c0 = 0.0;
  for (const auto& s : result.series) {
    if (s.t <= kPreloadFrac + 1e-12) {
      L_c0 = s.L_c;
      continue;
    }
    if (s.full_sliding) break;
    Ft.push_back(s.Fx);
    Lc.push_back(s.L_c);
    if (L_c0 > 0.0) reduction.push_back(1.0 - s.L_c / L_c0);
  }
  if (Ft.size() >= 5) {
    result.quad = fit_quadratic_xi(Ft, Lc);
    result.eta = fit_power(Ft, reduction);
  }
  return result;
}

CapSuiteResult run_cap_suite(const ScenarioConfig& cfg) {
  CapSuiteResult suite;
  suite.loads = cfg.cap_loads;
  suite.runs.resize(suite.loads.size());

  const int threads = std::max(1, std::min<int>(cfg.threads,
                                                static_cast<int>(suite.loads.size())));
  std::size_t next = 0;
  while (next < suite.loads.size()) {
    std::vector<std::pair<std::size_t, std::future<ScenarioResult>>> batch;
    for (int k = 0; k < threads && next < suite.loads.size(); ++k, ++next) {
      const double load = suite.loads[next];
      batch.emplace_back(next, std::async(std::launch::async, [&cfg, load]() {
                           return run_cap(cfg, load);
                         }));
    }
    for (auto& [idx, fut] : batch) suite.runs[idx] = fut.get();
  }

  std::vector<double> L_c0s, xis;
  for (const auto& run : suite.runs) {
    suite.quad.push_back(run.quad);
    suite.eta.push_back(run.eta);
    if (run.quad.ok && run.quad.xi > 0.0 && !run.detached) {
      L_c0s.push_back(run.quad.L_c0);
      xis.push_back(run.quad.xi);
    }
  }
  if (L_c0s.size() >= 3) suite.beta = fit_power(L_c0s, xis);
  return suite;
}

} // namespace adfric
