#include "adfric/friction_update.hpp"

namespace adfric {

const char* to_string(ContactStatus s) {
  switch (s) {
    case ContactStatus::far: return "far";
    case ContactStatus::frictionless_slide: return "frictionless";
    case ContactStatus::stick: return "stick";
    case ContactStatus::slide: return "slide";
  }
  return "?";
}

Vec2 trial_traction(ContactPointState& state, const ContactSurface& neighbor,
                    const Projection& proj, double eps_t) {
  if (!state.has_anchor || state.xi_s < neighbor.xi_begin() ||
      state.xi_s > neighbor.xi_end()) {
    state.xi_s = proj.xi;
    state.has_anchor = true;
    return Vec2::Zero();
  }
  return eps_t * (proj.x_p - neighbor.position(state.xi_s));
}

TangentialUpdate return_map(const ContactPointState& state, const Projection& proj,
                            const Vec2& t_trial, double t_slide, double eps_t) {
  TangentialUpdate upd;
  upd.t_trial = t_trial;
  upd.f_s = sliding_criterion(t_trial, t_slide);
  if (upd.f_s < 0.0) {
    upd.t_t = t_trial;
    upd.xi_s_new = state.xi_s;
    return upd;
  }
  const double norm = t_trial.norm();
  if (norm == 0.0) return frictionless_reset(proj); // only possible if t_slide = 0
  upd.sliding = true;
  upd.n_t = t_trial / norm;
  upd.dgamma = upd.f_s / eps_t;
  upd.xi_s_new = state.xi_s + upd.dgamma * upd.n_t.dot(proj.basis.a1_con);
  upd.t_t = t_trial - eps_t * upd.dgamma * upd.n_t; // ||t_t|| = t_slide
  return upd;
}

TangentialUpdate frictionless_reset(const Projection& proj) {
  TangentialUpdate upd;
  upd.sliding = true;
  upd.xi_s_new = proj.xi;
  upd.reanchored = true;
  return upd;
}

} // namespace adfric
