#pragma once

#include <stdexcept>
#include <variant>

namespace adfric {

//! Characteristic quantities of the integrated Lennard-Jones traction law.
//! All values are derived from the Hamaker constant A_H and the length
//! scale r0; the remaining members control the regularization and the
//! bookkeeping cutoffs.
struct AdhesionParams {
  double A_H = 0.0;  // Hamaker constant (energy)
  double r0 = 0.0;   // LJ length scale

  // closed-form characteristics
  double T0 = 0.0;     // A_H / (2 pi r0^3)
  double g_eq = 0.0;   // equilibrium distance, zero traction
  double g_max = 0.0;  // location of the traction minimum
  double T_max = 0.0;  // magnitude of the maximum adhesive traction
  double W_adh = 0.0;  // work of adhesion per unit area

  // regularization / bookkeeping
  double g_reg = 0.0;   // linear extrapolation below this gap (default g_eq)
  double g_area = 0.0;  // contact-area gap (= g_max)
  double g_far = 0.0;   // interaction cutoff; zero traction beyond
  bool adhesive = true; // false: traction forced to zero for g_n > g_eq

  static AdhesionParams from_hamaker(double A_H, double r0);
  static AdhesionParams from_macroscopic(double T_max, double W_adh);
};

struct Characteristics {
  double g_eq, T_max, g_max, W_adh;
};

//! The four closed-form characteristics of the LJ traction curve.
Characteristics derive_characteristics(double A_H, double r0);

//! Invert (T_max, W_adh) -> (A_H, r0). Round-trips with
//! derive_characteristics to machine precision.
struct MicroParams {
  double A_H, r0;
};
MicroParams params_from_macroscopic(double T_max, double W_adh);

//! Regularized normal traction: LJ curve for g_n in [g_reg, g_far),
//! linear extrapolation below g_reg, exactly zero beyond g_far.
//! Positive values are repulsive, negative adhesive.
double normal_traction(double g_n, const AdhesionParams& p);
double normal_traction_derivative(double g_n, const AdhesionParams& p);

// ---------------------------------------------------------------------------
// Friction laws
// ---------------------------------------------------------------------------

struct Frictionless {};

//! Distance-independent sliding threshold, logistic-regularized around the
//! cutoff gap. Stated in the current configuration.
struct LawDI {
  double tau = 0.0;    // sliding traction inside the cutoff
  double g_cut = 0.0;  // cutoff gap
  double k = 0.0;      // regularization slope (1/length)
};

//! Extended-Amontons threshold, proportional to the shifted normal
//! traction. Stated in the reference configuration.
struct LawEA {
  double mu = 0.0;     // friction parameter
  double s_cut = 1.0;  // cutoff interpolation factor, in [-0.01, 1]
};

using FrictionLaw = std::variant<Frictionless, LawDI, LawEA>;

//! Cutoff gap of model EA: g_cut = s_cut*g_max + (1-s_cut)*g_eq.
double g_cut_EA(const LawEA& law, const AdhesionParams& p);

//! Model DI threshold and its gap derivative.
double slide_threshold_DI(double g_n, const LawDI& law);
double slide_threshold_DI_derivative(double g_n, const LawDI& law);

//! Model EA threshold and its gap derivative (at fixed J_cl).
double slide_threshold_EA(double g_n, double J_cl, const LawEA& law,
                          const AdhesionParams& p);
double slide_threshold_EA_derivative(double g_n, double J_cl, const LawEA& law,
                                     const AdhesionParams& p);

//! Friction parameter of model DI that matches model EA on a flat
//! interface resting at the equilibrium gap. Requires g_eq < g_cut <= g_max.
double equivalent_mu_DI(double mu_EA, double g_cut, const AdhesionParams& p);

//! True iff the point counts toward the real contact area (g_n < g_area).
bool in_contact_area(double g_n, const AdhesionParams& p);

//! Default interaction cutoff for a law/adhesion combination.
double default_g_far(const FrictionLaw& law, const AdhesionParams& p);

//! Threshold value dispatched over the law variant. J_cl is ignored by DI.
double slide_threshold(const FrictionLaw& law, double g_n, double J_cl,
                       const AdhesionParams& p);
double slide_threshold_derivative(const FrictionLaw& law, double g_n,
                                  double J_cl, const AdhesionParams& p);

//! True where the tangential threshold vanishes identically (frictionless
//! sliding set). Model DI is regularized and never reaches zero in range.
bool threshold_is_zero(const FrictionLaw& law, double g_n,
                       const AdhesionParams& p);

} // namespace adfric
