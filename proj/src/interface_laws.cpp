#include "adfric/interface_laws.hpp"

#include <algorithm>
#include <cmath>

namespace adfric {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Pure LJ traction (no regularization), valid for g > 0.
double lj_traction(double g, const AdhesionParams& p) {
  const double q = p.r0 / g;
  const double q3 = q * q * q;
  const double q9 = q3 * q3 * q3;
  return p.T0 * (q9 / 45.0 - q3 / 3.0);
}

double lj_traction_derivative(double g, const AdhesionParams& p) {
  const double q = p.r0 / g;
  const double q2 = q * q;
  const double q4 = q2 * q2;
  const double q10 = q4 * q4 * q2;
  return -(p.T0 / p.r0) * (q10 / 5.0 - q4);
}

} // namespace

Characteristics derive_characteristics(double A_H, double r0) {
  if (A_H <= 0.0 || r0 <= 0.0)
    throw std::invalid_argument("derive_characteristics: A_H and r0 must be positive");
  Characteristics c;
  c.g_eq = r0 / std::pow(15.0, 1.0 / 6.0);
  c.g_max = r0 / std::pow(5.0, 1.0 / 6.0);
  c.T_max = std::sqrt(5.0) * A_H / (9.0 * kPi * r0 * r0 * r0);
  c.W_adh = std::cbrt(15.0) * A_H / (16.0 * kPi * r0 * r0);
  return c;
}

MicroParams params_from_macroscopic(double T_max, double W_adh) {
  if (T_max <= 0.0 || W_adh <= 0.0)
    throw std::invalid_argument("params_from_macroscopic: inputs must be positive");
  MicroParams m;
  m.r0 = (W_adh / T_max) * 16.0 * std::sqrt(5.0) / (9.0 * std::cbrt(15.0));
  m.A_H = T_max * 9.0 * kPi * m.r0 * m.r0 * m.r0 / std::sqrt(5.0);
  return m;
}

AdhesionParams AdhesionParams::from_hamaker(double A_H, double r0) {
  AdhesionParams p;
  p.A_H = A_H;
  p.r0 = r0;
  p.T0 = A_H / (2.0 * kPi * r0 * r0 * r0);
  const Characteristics c = derive_characteristics(A_H, r0);
  p.g_eq = c.g_eq;
  p.g_max = c.g_max;
  p.T_max = c.T_max;
  p.W_adh = c.W_adh;
  p.g_reg = p.g_eq;
  p.g_area = p.g_max;
  p.g_far = 3.0 * p.g_max;
  return p;
}

AdhesionParams AdhesionParams::from_macroscopic(double T_max, double W_adh) {
  const MicroParams m = params_from_macroscopic(T_max, W_adh);
  return from_hamaker(m.A_H, m.r0);
}

double normal_traction(double g_n, const AdhesionParams& p) {
  if (g_n >= p.g_far) return 0.0;
  if (!p.adhesive && g_n > p.g_eq) return 0.0;
  if (g_n < p.g_reg)
    return lj_traction(p.g_reg, p) + lj_traction_derivative(p.g_reg, p) * (g_n - p.g_reg);
  return lj_traction(g_n, p);
}

double normal_traction_derivative(double g_n, const AdhesionParams& p) {
  if (g_n >= p.g_far) return 0.0;
  if (!p.adhesive && g_n > p.g_eq) return 0.0;
  if (g_n < p.g_reg) return lj_traction_derivative(p.g_reg, p);
  return lj_traction_derivative(g_n, p);
}

double g_cut_EA(const LawEA& law, const AdhesionParams& p) {
  return law.s_cut * p.g_max + (1.0 - law.s_cut) * p.g_eq;
}

double slide_threshold_DI(double g_n, const LawDI& law) {
  // logistic transition between tau and zero around g_cut
  return law.tau / (1.0 + std::exp(law.k * (g_n - law.g_cut)));
}

double slide_threshold_DI_derivative(double g_n, const LawDI& law) {
  const double e = std::exp(law.k * (g_n - law.g_cut));
  if (!std::isfinite(e)) return 0.0;
  const double s = 1.0 / (1.0 + e);
  return law.tau * law.k * s * (s - 1.0);
}

double slide_threshold_EA(double g_n, double J_cl, const LawEA& law,
                          const AdhesionParams& p) {
  const double g_cut = g_cut_EA(law, p);
  if (g_n >= g_cut) return 0.0;
  return law.mu / J_cl * (normal_traction(g_n, p) - normal_traction(g_cut, p));
}

double slide_threshold_EA_derivative(double g_n, double J_cl, const LawEA& law,
                                     const AdhesionParams& p) {
  const double g_cut = g_cut_EA(law, p);
  if (g_n >= g_cut) return 0.0;
  return law.mu / J_cl * normal_traction_derivative(g_n, p);
}

double equivalent_mu_DI(double mu_EA, double g_cut, const AdhesionParams& p) {
  if (!(g_cut > p.g_eq && g_cut <= p.g_max))
    throw std::domain_error("equivalent_mu_DI: g_cut must lie in (g_eq, g_max]");
  return mu_EA * std::abs(normal_traction(g_cut, p)) / p.T_max;
}

bool in_contact_area(double g_n, const AdhesionParams& p) {
  return g_n < p.g_area;
}

double default_g_far(const FrictionLaw& law, const AdhesionParams& p) {
  // 3*g_max retains all but ~10% of the work of adhesion; the DI threshold
  // additionally needs head room past its own cutoff.
  double far = 3.0 * p.g_max;
  if (const auto* di = std::get_if<LawDI>(&law))
    far = std::max(far, 1.5 * di->g_cut);
  return far;
}

double slide_threshold(const FrictionLaw& law, double g_n, double J_cl,
                       const AdhesionParams& p) {
  return std::visit(
      [&](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, Frictionless>)
          return 0.0;
        else if constexpr (std::is_same_v<T, LawDI>)
          return slide_threshold_DI(g_n, l);
        else
          return slide_threshold_EA(g_n, J_cl, l, p);
      },
      law);
}

double slide_threshold_derivative(const FrictionLaw& law, double g_n,
                                  double J_cl, const AdhesionParams& p) {
  return std::visit(
      [&](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, Frictionless>)
          return 0.0;
        else if constexpr (std::is_same_v<T, LawDI>)
          return slide_threshold_DI_derivative(g_n, l);
        else
          return slide_threshold_EA_derivative(g_n, J_cl, l, p);
      },
      law);
}

bool threshold_is_zero(const FrictionLaw& law, double g_n,
                       const AdhesionParams& p) {
  if (std::holds_alternative<Frictionless>(law)) return true;
  if (const auto* ea = std::get_if<LawEA>(&law))
    return g_n >= g_cut_EA(*ea, p);
  // the regularized DI threshold never vanishes exactly; points where it has
  // decayed to noise must not carry the sticking spring
  const auto& di = std::get<LawDI>(law);
  return slide_threshold_DI(g_n, di) < 1e-8 * di.tau;
}

} // namespace adfric
