#pragma once

#include "adfric/solver.hpp"

#include <string>

namespace adfric {

enum class ScenarioId { strip, cylinders, cap };
enum class LawChoice { di, ea, frictionless, nonadhesive_di };

//! All quantities in the normalized unit system (E and L0 scaled to 1);
//! physical unit conversion is a CLI-boundary concern.
struct ScenarioConfig {
  ScenarioId scenario = ScenarioId::strip;

  // geometry
  double strip_length = 150.0;
  double strip_height = 7.5;
  double cyl_radius = 40.0;
  double cyl_overlap = 0.25; // vertical interference as a fraction of R
  double cap_chord = 40.0;
  double cap_height = 10.0;

  // material
  double E = 1.0;
  double nu = 0.2;
  Material::Variant variant = Material::Variant::standard_compressible;

  // adhesion: (A_H, r0) when both positive, else (T_max, W_adh)
  double A_H = 0.0, r0 = 0.0;
  double T_max = 0.0, W_adh = 0.0;
  double g_far_scale = 0.0; // override: g_far = scale * g_max (0: law default)

  // friction law
  LawChoice law = LawChoice::frictionless;
  double mu = 0.0;       // mu_EA, or mu_DI (tau_DI = mu * T_max)
  double s_cut = 1.0;    // EA cutoff factor
  double k_DI = 80.0;    // regularization slope in units of 1/r0
  double eps_t = 50.0;   // tangential penalty, E/L0
  bool use_stretch = true;

  // mesh
  double resolution_scale = 1.0;

  // loading
  double u_max = 90.0;       // strip: pull height; cylinders: 2R is hard-wired
  double step = 0.5;         // nominal displacement increment
  std::vector<double> cap_loads{3.0, 2.0, 1.2, 0.6, 0.2, 0.0, -0.08};
  double cap_detach_load = -0.2; // strongly tensile load for the detachment run
  double cap_shear_umax = 12.0;
  double cap_shear_step = 0.06;
  double cap_preload_steps = 8;
  int threads = 2;

  // output
  std::string out_dir;
  bool dump_qp = false;
  int seed = 0;

  AdhesionParams make_adhesion() const;
  FrictionLaw make_law(const AdhesionParams& p) const;
  Material make_material() const;
  SolverConfig make_solver_config() const;
};

// --- least-squares fits ------------------------------------------------------

struct QuadraticFit {
  double L_c0 = 0.0, xi = 0.0, r2 = 0.0;
  bool ok = false;
};
//! L_c(F_t) = L_c0 - xi * F_t^2, linear least squares in (1, F_t^2).
QuadraticFit fit_quadratic_xi(const std::vector<double>& F_t,
                              const std::vector<double>& L_c);

struct PowerFit {
  double exponent = 0.0, ln_prefactor = 0.0, r2 = 0.0;
  bool ok = false;
  int excluded = 0; // non-positive samples skipped
};
//! y = A * x^b via log-log linear least squares; non-positive pairs excluded.
PowerFit fit_power(const std::vector<double>& x, const std::vector<double>& y);

// --- per-step records --------------------------------------------------------

struct StepSample {
  double t = 0.0, u = 0.0;
  double Fx = 0.0, Fy = 0.0;   // scenario force report (per out-of-plane width)
  double L_c = 0.0, L_peel = 0.0, L_slide = 0.0;
  double Pi_ext = 0.0, Pi_int = 0.0;
  int n_contact = 0, n_stick = 0, n_slide = 0;
  bool full_sliding = false;
  double corner_syy = 0.0;
  double plate_y = 0.0;
};

struct ScenarioResult {
  std::vector<StepSample> series;
  SolveReport report;
  bool detached = false;
  double last_L_c = 0.0;
  // strip post-processing
  double gamma_mean = 0.0, gamma_rel_std = 0.0;
  std::vector<std::array<double, 2>> gamma_curve; // (L_peel, Gamma*)
  // cap fits
  QuadraticFit quad;
  PowerFit eta;
  double W_adh = 0.0, T_max = 0.0;
  // cylinders: base profile sigma_yy at u = 0.5 R (x, value)
  std::vector<std::array<double, 2>> base_profile;
};

// --- model builders (shared by runners, tests, and the acceptance suite) -----

struct StripSetup {
  Model model;
  int pull_node = -1;
  double length = 0.0;
};
StripSetup build_strip(const ScenarioConfig& cfg);

struct CylindersSetup {
  Model model;
  int lower_nodes = 0;  // nodes [0, lower_nodes) belong to the lower body
  int corner_elem = 0;  // element containing the lower-left base corner
  std::vector<int> upper_base_dofs;
  std::vector<int> base_profile_nodes;
  double R = 0.0;
};
//! initial_offset: horizontal position of the upper body relative to
//! alignment (the run drives it from -R to +R).
CylindersSetup build_cylinders(const ScenarioConfig& cfg, double initial_offset);

struct CapSetup {
  Model model;
  int plate_drive = 0;
  double apex = 0.0;
};
CapSetup build_cap(const ScenarioConfig& cfg, double F_n, double preload_frac);

// --- runners ------------------------------------------------------------------

ScenarioResult run_strip(const ScenarioConfig& cfg);
ScenarioResult run_cylinders(const ScenarioConfig& cfg);
ScenarioResult run_cap(const ScenarioConfig& cfg, double F_n);

struct CapSuiteResult {
  std::vector<double> loads;
  std::vector<ScenarioResult> runs;
  std::vector<QuadraticFit> quad;  // per load
  std::vector<PowerFit> eta;       // per load
  PowerFit beta;                   // xi(L_c0) power law over the ladder
};
CapSuiteResult run_cap_suite(const ScenarioConfig& cfg);

// --- measurement helpers ------------------------------------------------------

struct ContactMeasures {
  double L_c = 0.0;      // current-configuration contact span
  double L_peel = 0.0;   // nominal detached length from the right end
  double L_stick = 0.0;  // nominal length of the sticking set
  int n_contact = 0, n_stick = 0, n_slide = 0;
  bool full_sliding = false;
};
ContactMeasures measure_contact(const Model& model, int pair_id, double ref_right_end);

//! Gamma*(L_peel) by centered differences of dPi = Pi_ext - Pi_int after
//! monotone re-indexing by L_peel.
std::vector<std::array<double, 2>>
fracture_energy_curve(const std::vector<StepSample>& series);

// --- I/O -----------------------------------------------------------------------

ScenarioConfig load_config(const std::string& path);
void write_outputs(const ScenarioConfig& cfg, const ScenarioResult& result,
                   const std::string& suffix = "");
void write_suite_outputs(const ScenarioConfig& cfg, const CapSuiteResult& suite);
void dump_quadrature_points(const Model& model, const std::string& path);

} // namespace adfric
